use std::collections::HashMap;

use super::group::close;
use super::{Mat2, MatGroup};

/// `<G, -I>` followed by every index-2 subgroup of it that omits `-I`.
///
/// Index-2 subgroups are kernels of characters to `F_2`, which factor
/// through the quotient by the subgroup generated by squares.
pub fn twists(g: &MatGroup) -> Vec<MatGroup> {
    let ell = g.ell();
    let t = g.with_neg_identity();
    let minus = Mat2::neg_identity(ell);

    let square_gens = grow(ell, &[], t.elements().iter().map(|x| x.mul(x)));
    let (basis, span) = grow_with_basis(ell, &square_gens, t.elements().iter().copied());
    let rank = basis.len();
    let square_group: Vec<Mat2> = close(ell, &square_gens);

    // coset of the square subgroup -> F_2 coordinate vector
    let mut coord: HashMap<Mat2, u32> = HashMap::with_capacity(t.order());
    for v in 0..1u32 << rank {
        let mut rep = Mat2::identity(ell);
        for (i, b) in basis.iter().enumerate() {
            if v >> i & 1 == 1 {
                rep = rep.mul(b);
            }
        }
        for s in &square_group {
            coord.insert(s.mul(&rep), v);
        }
    }
    debug_assert_eq!(span, t.order());
    debug_assert_eq!(coord.len(), t.order());

    let mut out = vec![t.clone()];
    let m = coord[&minus];
    for phi in 1..1u32 << rank {
        if (phi & m).count_ones() % 2 == 0 {
            continue;
        }
        let kernel: Vec<Mat2> = t
            .elements()
            .iter()
            .copied()
            .filter(|x| (phi & coord[x]).count_ones() % 2 == 0)
            .collect();
        out.push(MatGroup::from_elements(t.ctx(), kernel));
    }
    out
}

/// Generators for the group spanned by `start` and `candidates`.
fn grow(ell: u32, start: &[Mat2], candidates: impl Iterator<Item = Mat2>) -> Vec<Mat2> {
    let mut gens = start.to_vec();
    let mut span: std::collections::HashSet<Mat2> = close(ell, &gens).into_iter().collect();
    for x in candidates {
        if !span.contains(&x) {
            gens.push(x);
            span = close(ell, &gens).into_iter().collect();
        }
    }
    gens
}

/// Like [`grow`], but returns only the added elements and the final order.
fn grow_with_basis(ell: u32, start: &[Mat2], candidates: impl Iterator<Item = Mat2>) -> (Vec<Mat2>, usize) {
    let gens = grow(ell, start, candidates);
    let order = close(ell, &gens).len();
    (gens[start.len()..].to_vec(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::PrimeCtx;

    #[test]
    fn trivial_group_twists() {
        let ctx = PrimeCtx::new(3).unwrap();
        let tw = twists(&MatGroup::trivial(ctx));
        assert_eq!(tw.len(), 2);
        assert_eq!(tw[0].order(), 2);
        assert_eq!(tw[1], MatGroup::trivial(ctx));
    }

    #[test]
    fn twists_regenerate_the_same_group() {
        let ctx = PrimeCtx::new(7).unwrap();
        let g = MatGroup::closure(ctx, &[Mat2::new(7, 2, 0, 0, 4).unwrap(), Mat2::new(7, 0, 1, 1, 0).unwrap()])
            .unwrap();
        let tw = twists(&g);
        assert!(tw.len() > 1);
        for t in &tw {
            assert_eq!(t.with_neg_identity(), tw[0]);
            assert!(t.verify_closed());
        }
        assert!(tw[1..].iter().all(|t| !t.contains_neg_identity()));
    }
}
