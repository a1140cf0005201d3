use std::collections::HashSet;
use std::ops::Deref;

use super::Mat2;
use crate::modarith::PrimeCtx;
use crate::{Error, Result};

/// A finite subgroup of `GL2(Z/ellZ)`, held as its full element set.
///
/// Elements are kept sorted by [`Mat2::key`], which doubles as the
/// canonical form used for equality and hashing.
#[derive(Clone, Debug)]
pub struct MatGroup {
    ctx: PrimeCtx,
    elements: Vec<Mat2>,
    generators: Vec<Mat2>,
}

impl PartialEq for MatGroup {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.ell() == other.ctx.ell() && self.elements == other.elements
    }
}

impl Eq for MatGroup {}

impl std::hash::Hash for MatGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

fn check_modulus(ctx: &PrimeCtx, m: &Mat2) -> Result<()> {
    if m.ell() != ctx.ell() {
        Err(Error::ModulusMismatch(ctx.ell() as u64, m.ell() as u64))
    } else {
        Ok(())
    }
}

/// Breadth-first product closure of `gens`, identity included.
pub(crate) fn close(ell: u32, gens: &[Mat2]) -> Vec<Mat2> {
    let id = Mat2::identity(ell);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

/// Order of the group generated by `gens` modulo any prime, 2 included.
pub fn generated_order(ell: u32, gens: &[Mat2]) -> usize {
    close(ell, gens).len()
}

impl MatGroup {
    /// Smallest subgroup containing `gens`; an empty list gives the trivial group.
    pub fn closure(ctx: PrimeCtx, gens: &[Mat2]) -> Result<Self> {
        for g in gens {
            check_modulus(&ctx, g)?;
            if g.det() == 0 {
                return Err(Error::Singular(ctx.ell() as u64));
            }
        }
        let mut elements = close(ctx.ell(), gens);
        elements.sort_unstable();
        let generators = gens.iter().copied().filter(|g| !g.is_identity()).collect();
        Ok(MatGroup {
            ctx,
            elements,
            generators,
        })
    }

    pub fn trivial(ctx: PrimeCtx) -> Self {
        MatGroup {
            ctx,
            elements: vec![Mat2::identity(ctx.ell())],
            generators: Vec::new(),
        }
    }

    /// Wraps an element set already known to be a group and picks a small
    /// generating set for it.
    pub(crate) fn from_elements(ctx: PrimeCtx, mut elements: Vec<Mat2>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let generators = greedy_generators(ctx.ell(), &elements);
        MatGroup {
            ctx,
            elements,
            generators,
        }
    }

    /// Wraps a sorted element set together with generators known to produce it.
    pub(crate) fn from_parts(ctx: PrimeCtx, elements: Vec<Mat2>, generators: Vec<Mat2>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        MatGroup {
            ctx,
            elements,
            generators,
        }
    }

    pub fn ctx(&self) -> PrimeCtx {
        self.ctx
    }

    pub fn ell(&self) -> u32 {
        self.ctx.ell()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|m| other.contains(m))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .enumerate()
            .all(|(i, x)| g[i + 1..].iter().all(|y| x.mul(y) == y.mul(x)))
    }

    pub fn contains_neg_identity(&self) -> bool {
        self.contains(&Mat2::neg_identity(self.ell()))
    }

    /// `<G, -I>`.
    pub fn with_neg_identity(&self) -> MatGroup {
        if self.contains_neg_identity() {
            return self.clone();
        }
        let minus = Mat2::neg_identity(self.ell());
        let mut elements: Vec<Mat2> = self.elements.iter().map(|m| m.mul(&minus)).collect();
        elements.extend_from_slice(&self.elements);
        elements.sort_unstable();
        let mut generators = self.generators.clone();
        generators.push(minus);
        MatGroup::from_parts(self.ctx, elements, generators)
    }

    /// Largest element order.
    pub fn exponent_bound(&self) -> u64 {
        self.elements.iter().map(Mat2::order).max().unwrap_or(1)
    }

    /// `g G g^-1`.
    pub fn conjugate(&self, g: &Mat2) -> MatGroup {
        let gi = g.inv();
        let mut elements: Vec<Mat2> = self.elements.iter().map(|h| g.mul(h).mul(&gi)).collect();
        elements.sort_unstable();
        let generators = self.generators.iter().map(|h| g.mul(h).mul(&gi)).collect();
        MatGroup::from_parts(self.ctx, elements, generators)
    }

    /// `G ∩ H` as a group.
    pub fn intersection(&self, other: &MatGroup) -> MatGroup {
        let elems = self
            .elements
            .iter()
            .copied()
            .filter(|m| other.contains(m))
            .collect();
        MatGroup::from_elements(self.ctx, elems)
    }

    /// Checks the group axioms on the stored element set.
    pub fn verify_closed(&self) -> bool {
        self.contains(&Mat2::identity(self.ell()))
            && self
                .elements
                .iter()
                .all(|x| self.contains(&x.inv()) && self.generators.iter().all(|g| self.contains(&x.mul(g))))
            && close(self.ell(), &self.generators).len() == self.order()
    }
}

/// Picks generators by scanning elements of decreasing order.
fn greedy_generators(ell: u32, elements: &[Mat2]) -> Vec<Mat2> {
    let mut by_order: Vec<(u64, Mat2)> = elements.iter().map(|m| (m.order(), *m)).collect();
    by_order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut gens = Vec::new();
    let mut span: HashSet<Mat2> = HashSet::from([Mat2::identity(ell)]);
    for (_, m) in by_order {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(&m) {
            gens.push(m);
            span = close(ell, &gens).into_iter().collect();
        }
    }
    gens
}

/// A subgroup together with the order of the group it was found in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: MatGroup,
    parent_order: usize,
}

impl Subgroup {
    pub fn new(group: MatGroup, parent: &MatGroup) -> Self {
        debug_assert!(parent.order() % group.order() == 0);
        Subgroup {
            group,
            parent_order: parent.order(),
        }
    }

    pub(crate) fn with_parent_order(group: MatGroup, parent_order: usize) -> Self {
        Subgroup {
            group,
            parent_order,
        }
    }

    pub fn group(&self) -> &MatGroup {
        &self.group
    }

    pub fn into_group(self) -> MatGroup {
        self.group
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    /// `[parent : H]`.
    pub fn index(&self) -> u64 {
        (self.parent_order / self.group.order()) as u64
    }
}

impl Deref for Subgroup {
    type Target = MatGroup;

    fn deref(&self) -> &MatGroup {
        &self.group
    }
}

/// `{g h g^-1 : h in H}`, keeping the parent.
pub fn conjugate(g: &Mat2, h: &Subgroup) -> Subgroup {
    Subgroup::with_parent_order(h.group.conjugate(g), h.parent_order)
}

/// Subspace of `F_ell^2` fixed pointwise by a set of matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedSpace {
    Zero,
    Line([u32; 2]),
    Plane,
}

/// `ker(m - I)`.
fn kernel_minus_identity(m: &Mat2) -> FixedSpace {
    let l = m.ell();
    let [a, b, c, d] = m.entries();
    let p = (a + l - 1) % l;
    let s = (d + l - 1) % l;
    let (q, r) = (b, c);
    if p == 0 && q == 0 && r == 0 && s == 0 {
        return FixedSpace::Plane;
    }
    let det = (p as u64 * s as u64 + (l as u64 - (q as u64 * r as u64 % l as u64))) % l as u64;
    if det != 0 {
        return FixedSpace::Zero;
    }
    // rank one: the kernel is orthogonal to a nonzero row
    let v = if p != 0 || q != 0 {
        [q, (l - p) % l]
    } else {
        [s, (l - r) % l]
    };
    FixedSpace::Line(v)
}

fn same_line(u: [u32; 2], v: [u32; 2], l: u32) -> bool {
    let l = l as u64;
    (u[0] as u64 * v[1] as u64) % l == (u[1] as u64 * v[0] as u64) % l
}

/// Intersection of the fixed spaces of `mats`.
pub fn fixed_space(mats: &[Mat2]) -> FixedSpace {
    let mut acc = FixedSpace::Plane;
    for m in mats {
        acc = match (acc, kernel_minus_identity(m)) {
            (FixedSpace::Zero, _) | (_, FixedSpace::Zero) => FixedSpace::Zero,
            (FixedSpace::Plane, k) => k,
            (k, FixedSpace::Plane) => k,
            (FixedSpace::Line(u), FixedSpace::Line(v)) => {
                if same_line(u, v, m.ell()) {
                    FixedSpace::Line(u)
                } else {
                    FixedSpace::Zero
                }
            }
        };
        if acc == FixedSpace::Zero {
            break;
        }
    }
    acc
}

/// Whether some nonzero vector is fixed by every matrix in `mats`.
///
/// Passing a generating set of a group gives the answer for the group.
pub fn fixes_nonzero_vector(mats: &[Mat2]) -> bool {
    fixed_space(mats) != FixedSpace::Zero
}
