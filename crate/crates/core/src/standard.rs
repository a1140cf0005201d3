//! The standard subgroups of `GL2(Z/ellZ)` and the tests deciding whether a
//! group is conjugate into one of them.
//!
//! Conjugacy into `Z`, the Cartan groups, their normalizers, the ramified
//! Cartan group and the Borel group is decided exactly through the Möbius
//! action on the projective line: each of these groups is the stabilizer of
//! a point, a pair of points or a conjugate pair of points over `F_ell` or
//! `F_ell^2`. [`conj_into_bruteforce`] is the independent search used to
//! cross-check them.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::matgroup::{Mat2, MatGroup, Spectral};
use crate::modarith::{inv_mod, PrimeCtx};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StandardKind {
    Z,
    Cs,
    Cns,
    Ns,
    Nns,
    Cr,
    Borel,
    Full,
}

impl StandardKind {
    /// The five kinds of the inclusion lattice `Z < Cs < Ns`, `Z < Cns < Nns`.
    pub const LATTICE: [StandardKind; 5] = [Self::Z, Self::Cs, Self::Cns, Self::Ns, Self::Nns];
    /// The kinds that carry a `belongs to` notion.
    pub const WITH_BELONGS: [StandardKind; 6] =
        [Self::Z, Self::Cs, Self::Cns, Self::Ns, Self::Nns, Self::Cr];
    pub const ALL: [StandardKind; 8] = [
        Self::Z,
        Self::Cs,
        Self::Cns,
        Self::Ns,
        Self::Nns,
        Self::Cr,
        Self::Borel,
        Self::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Z => "Z",
            Self::Cs => "Cs",
            Self::Cns => "Cns",
            Self::Ns => "Ns",
            Self::Nns => "Nns",
            Self::Cr => "Cr",
            Self::Borel => "Borel",
            Self::Full => "GL2",
        }
    }

    /// Kinds a group must avoid to belong to `self`.
    pub fn excluded_below(self) -> Result<&'static [StandardKind]> {
        use StandardKind::*;
        match self {
            Z => Ok(&[]),
            Cs | Cns | Cr => Ok(&[Z]),
            Ns => Ok(&[Z, Cs]),
            Nns => Ok(&[Z, Cns]),
            Borel | Full => Err(Error::NoBelongsNotion(self)),
        }
    }

    /// Strict containment among the canonical groups of the lattice.
    pub fn strictly_below(self, other: StandardKind) -> bool {
        use StandardKind::*;
        matches!(
            (self, other),
            (Z, Cs) | (Z, Cns) | (Z, Ns) | (Z, Nns) | (Cs, Ns) | (Cns, Nns)
        )
    }

    /// Order of the canonical group.
    pub fn order(self, ell: u64) -> u64 {
        use StandardKind::*;
        let l = ell;
        match self {
            Z => l - 1,
            Cs => (l - 1) * (l - 1),
            Cns => l * l - 1,
            Ns => 2 * (l - 1) * (l - 1),
            Nns => 2 * (l * l - 1),
            Cr => l * (l - 1),
            Borel => l * (l - 1) * (l - 1),
            Full => l * (l + 1) * (l - 1) * (l - 1),
        }
    }
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandardKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || (s.eq_ignore_ascii_case("full") && *k == Self::Full))
            .ok_or_else(|| format!("unknown standard subgroup `{s}`"))
    }
}

/// Membership of `m` in the canonical group of `kind`.
pub fn in_canonical(ctx: &PrimeCtx, kind: StandardKind, m: &Mat2) -> bool {
    let l = ctx.ell() as u64;
    let eps = ctx.epsilon() as u64;
    let [a, b, c, d] = m.entries().map(|x| x as u64);
    let diag = b == 0 && c == 0;
    let in_cns = a == d && b == eps * c % l;
    match kind {
        StandardKind::Z => diag && a == d,
        StandardKind::Cs => diag,
        StandardKind::Cns => in_cns,
        StandardKind::Ns => diag || (a == 0 && d == 0),
        StandardKind::Nns => in_cns || ((a + d) % l == 0 && (b + eps * c) % l == 0),
        StandardKind::Cr => c == 0 && a == d,
        StandardKind::Borel => c == 0,
        StandardKind::Full => true,
    }
}

/// The canonical standard groups for one prime, built from explicit element
/// formulas.
pub struct CanonicalGroups {
    ctx: PrimeCtx,
    groups: [MatGroup; 7],
    trio: [MatGroup; 3],
    full: OnceLock<MatGroup>,
}

impl CanonicalGroups {
    pub fn new(ctx: PrimeCtx) -> Self {
        use StandardKind::*;
        let groups = [Z, Cs, Cns, Ns, Nns, Cr, Borel].map(|k| build(&ctx, k));
        let trio = [Trio::G, Trio::H1, Trio::H2].map(|t| build_trio(&ctx, t));
        CanonicalGroups {
            ctx,
            groups,
            trio,
            full: OnceLock::new(),
        }
    }

    pub fn ctx(&self) -> PrimeCtx {
        self.ctx
    }

    /// The canonical group of `kind`; `Full` is materialised on first use.
    pub fn get(&self, kind: StandardKind) -> &MatGroup {
        match kind {
            StandardKind::Full => self.full.get_or_init(|| build(&self.ctx, StandardKind::Full)),
            k => &self.groups[k as usize],
        }
    }

    /// `G(ell)`: upper triangular with diagonal `(a, ±a)`.
    pub fn g(&self) -> &MatGroup {
        &self.trio[0]
    }

    /// `H1(ell)`: diagonal `(a, ±a)` with `a` a square.
    pub fn h1(&self) -> &MatGroup {
        &self.trio[1]
    }

    /// `H2(ell)`: diagonal `(±a, a)` with `a` a square.
    pub fn h2(&self) -> &MatGroup {
        &self.trio[2]
    }

    pub fn borel_trio(&self) -> [&MatGroup; 3] {
        [self.g(), self.h1(), self.h2()]
    }
}

fn mat(l: u32, e: [u64; 4]) -> Mat2 {
    Mat2::from_raw(l, e.map(|x| (x % l as u64) as u32))
}

/// A generator of the cyclic group `C_ns`.
fn cns_generator(ctx: &PrimeCtx) -> Mat2 {
    let l = ctx.ell() as u64;
    let eps = ctx.epsilon() as u64;
    let target = l * l - 1;
    for x in 0..l {
        for y in 1..l {
            let m = mat(ctx.ell(), [x, eps * y, y, x]);
            if m.order() == target {
                return m;
            }
        }
    }
    unreachable!("F_ell^2 has a primitive element")
}

fn build(ctx: &PrimeCtx, kind: StandardKind) -> MatGroup {
    let l = ctx.ell();
    let ll = l as u64;
    let eps = ctx.epsilon() as u64;
    let alpha = ctx.alpha() as u64;
    let units = 1..ll;
    let mut elems = Vec::new();
    let gens: Vec<Mat2>;
    let unipotent = mat(l, [1, 1, 0, 1]);
    let swap = mat(l, [0, 1, 1, 0]);
    match kind {
        StandardKind::Z => {
            elems.extend(units.map(|x| mat(l, [x, 0, 0, x])));
            gens = vec![mat(l, [alpha, 0, 0, alpha])];
        }
        StandardKind::Cs | StandardKind::Ns => {
            for x in 1..ll {
                for y in 1..ll {
                    elems.push(mat(l, [x, 0, 0, y]));
                    if kind == StandardKind::Ns {
                        elems.push(mat(l, [0, x, y, 0]));
                    }
                }
            }
            let mut g = vec![mat(l, [alpha, 0, 0, 1]), mat(l, [1, 0, 0, alpha])];
            if kind == StandardKind::Ns {
                g.push(swap);
            }
            gens = g;
        }
        StandardKind::Cns | StandardKind::Nns => {
            for x in 0..ll {
                for y in 0..ll {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    elems.push(mat(l, [x, eps * y, y, x]));
                    if kind == StandardKind::Nns {
                        elems.push(mat(l, [x, ll * ll - eps * y, y, ll - x]));
                    }
                }
            }
            let mut g = vec![cns_generator(ctx)];
            if kind == StandardKind::Nns {
                g.push(mat(l, [1, 0, 0, ll - 1]));
            }
            gens = g;
        }
        StandardKind::Cr => {
            for a in 1..ll {
                for b in 0..ll {
                    elems.push(mat(l, [a, b, 0, a]));
                }
            }
            gens = vec![mat(l, [alpha, 0, 0, alpha]), unipotent];
        }
        StandardKind::Borel => {
            for a in 1..ll {
                for b in 0..ll {
                    for d in 1..ll {
                        elems.push(mat(l, [a, b, 0, d]));
                    }
                }
            }
            gens = vec![mat(l, [alpha, 0, 0, 1]), mat(l, [1, 0, 0, alpha]), unipotent];
        }
        StandardKind::Full => {
            for key in 0..ll.pow(4) {
                let e = [key / ll.pow(3), key / ll.pow(2) % ll, key / ll % ll, key % ll];
                if (e[0] * e[3] + ll * ll - e[1] * e[2] % ll) % ll != 0 {
                    elems.push(mat(l, e));
                }
            }
            gens = vec![mat(l, [alpha, 0, 0, 1]), unipotent, mat(l, [1, 0, 1, 1])];
        }
    }
    elems.sort_unstable();
    MatGroup::from_parts(*ctx, elems, gens)
}

#[derive(Clone, Copy)]
enum Trio {
    G,
    H1,
    H2,
}

fn build_trio(ctx: &PrimeCtx, which: Trio) -> MatGroup {
    let l = ctx.ell();
    let ll = l as u64;
    let alpha = ctx.alpha() as u64;
    let diag: Vec<u64> = match which {
        Trio::G => (1..ll).collect(),
        Trio::H1 | Trio::H2 => ctx.squares().into_iter().map(u64::from).collect(),
    };
    let mut elems = Vec::new();
    for &a in &diag {
        for s in [1, ll - 1] {
            for b in 0..ll {
                let e = match which {
                    Trio::H2 => [s * a, b, 0, a],
                    _ => [a, b, 0, s * a],
                };
                elems.push(mat(l, e));
            }
        }
    }
    elems.sort_unstable();
    elems.dedup();
    let a0 = match which {
        Trio::G => alpha,
        _ => alpha * alpha,
    };
    let flip = match which {
        Trio::H2 => mat(l, [ll - 1, 0, 0, 1]),
        _ => mat(l, [1, 0, 0, ll - 1]),
    };
    let gens = vec![mat(l, [a0, 0, 0, a0]), mat(l, [1, 1, 0, 1]), flip];
    MatGroup::from_parts(*ctx, elems, gens)
}

/// A point of `P^1(F_ell)`; `ell` stands for infinity.
type P1 = u32;

fn mobius(m: &Mat2, z: P1) -> P1 {
    let l = m.ell() as u64;
    let [a, b, c, d] = m.entries().map(|x| x as u64);
    if z as u64 == l {
        return if c == 0 { l as u32 } else { (a * inv_mod(c, l) % l) as u32 };
    }
    let z = z as u64;
    let num = (a * z + b) % l;
    let den = (c * z + d) % l;
    if den == 0 {
        l as u32
    } else {
        (num * inv_mod(den, l) % l) as u32
    }
}

/// `u + v s` with `s^2 = epsilon`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Fq2 {
    u: u64,
    v: u64,
}

struct Quad {
    l: u64,
    eps: u64,
}

impl Quad {
    fn mul(&self, x: Fq2, y: Fq2) -> Fq2 {
        let l = self.l;
        Fq2 {
            u: (x.u * y.u + self.eps * (x.v * y.v % l)) % l,
            v: (x.u * y.v + x.v * y.u) % l,
        }
    }

    fn inv(&self, x: Fq2) -> Fq2 {
        let l = self.l;
        let norm = (x.u * x.u % l + l - self.eps * (x.v * x.v % l) % l) % l;
        let ni = inv_mod(norm, l);
        Fq2 {
            u: x.u * ni % l,
            v: (l - x.v) % l * ni % l,
        }
    }

    /// Möbius action on a point off the rational line (the denominator never vanishes).
    fn act(&self, m: &Mat2, z: Fq2) -> Fq2 {
        let l = self.l;
        let [a, b, c, d] = m.entries().map(|x| x as u64);
        let num = Fq2 {
            u: (a * z.u + b) % l,
            v: a * z.v % l,
        };
        let den = Fq2 {
            u: (c * z.u + d) % l,
            v: c * z.v % l,
        };
        self.mul(num, self.inv(den))
    }

    fn conj(&self, z: Fq2) -> Fq2 {
        Fq2 {
            u: z.u,
            v: (self.l - z.v) % self.l,
        }
    }

    /// Points of `P^1(F_ell^2)` off `P^1(F_ell)`, one from each conjugate pair.
    fn half_points(&self) -> impl Iterator<Item = Fq2> + '_ {
        (0..self.l).flat_map(move |u| (1..=(self.l - 1) / 2).map(move |v| Fq2 { u, v }))
    }
}

fn nonscalar(gens: &[Mat2]) -> Vec<Mat2> {
    gens.iter().copied().filter(|g| !g.is_scalar()).collect()
}

/// Number of points of `P^1(F_ell)` fixed by every matrix in `gens`, capped at 2.
fn common_fixed_points(l: u32, gens: &[Mat2]) -> usize {
    (0..=l)
        .filter(|&z| gens.iter().all(|g| mobius(g, z) == z))
        .take(2)
        .count()
}

/// Whether some unordered pair of distinct points of `P^1(F_ell)` is
/// preserved by every matrix in `gens`.
fn has_invariant_pair(l: u32, gens: &[Mat2]) -> bool {
    let Some(first) = gens.first() else {
        return true;
    };
    for p in 0..=l {
        // q is forced to be the image of p if the first generator moves it
        let fp = mobius(first, p);
        let candidates: Vec<P1> = if fp != p {
            vec![fp]
        } else {
            (p + 1..=l).collect()
        };
        for q in candidates {
            let ok = gens.iter().all(|g| {
                let (gp, gq) = (mobius(g, p), mobius(g, q));
                (gp == p && gq == q) || (gp == q && gq == p)
            });
            if ok {
                return true;
            }
        }
    }
    false
}

/// Whether `gens` generate a group conjugate into the canonical group of `kind`.
pub fn conj_into_gens(ctx: &PrimeCtx, gens: &[Mat2], kind: StandardKind) -> bool {
    let l = ctx.ell();
    let gens = nonscalar(gens);
    if gens.is_empty() {
        return true;
    }
    let quad = Quad {
        l: l as u64,
        eps: ctx.epsilon() as u64,
    };
    match kind {
        StandardKind::Z => false,
        StandardKind::Full => true,
        StandardKind::Borel => common_fixed_points(l, &gens) >= 1,
        StandardKind::Cs => common_fixed_points(l, &gens) >= 2,
        StandardKind::Cr => {
            gens.iter().all(|g| g.discriminant() == 0) && common_fixed_points(l, &gens) >= 1
        }
        StandardKind::Ns => has_invariant_pair(l, &gens),
        StandardKind::Cns => {
            // fixed points of an irreducible generator are a conjugate pair
            if gens.iter().any(|g| g.spectral_profile() != Spectral::Irreducible) {
                return false;
            }
            quad.half_points()
                .any(|z| gens.iter().all(|g| quad.act(g, z) == z))
        }
        StandardKind::Nns => quad.half_points().any(|z| {
            let zb = quad.conj(z);
            gens.iter().all(|g| {
                let w = quad.act(g, z);
                w == z || w == zb
            })
        }),
    }
}

/// Whether `h` is conjugate in `GL2` to a subgroup of the canonical group of `kind`.
pub fn conj_into(h: &MatGroup, kind: StandardKind) -> bool {
    if kind == StandardKind::Z {
        return h.generators().iter().all(Mat2::is_scalar);
    }
    StandardKind::order(kind, h.ell() as u64) % h.order() as u64 == 0
        && conj_into_gens(&h.ctx(), h.generators(), kind)
}

/// Exhaustive search for `g` with `g h g^-1` inside the canonical group.
///
/// Groups whose order does not divide the target order are rejected before
/// the search.
pub fn conj_into_bruteforce(h: &MatGroup, kind: StandardKind, canon: &CanonicalGroups, exec: Exec) -> bool {
    let ctx = canon.ctx();
    let target = kind.order(ctx.ell() as u64);
    if target % h.order() as u64 != 0 {
        return false;
    }
    let gens = h.generators();
    exec.any(canon.get(StandardKind::Full).elements(), |g| {
        gens.iter().all(|x| in_canonical(&ctx, kind, &x.conj_by(g)))
    })
}

/// Which of the kinds with a `belongs to` notion a group is conjugate into.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConjProfile(u8);

impl ConjProfile {
    pub fn of(h: &MatGroup) -> Self {
        let mut bits = 0;
        for k in StandardKind::WITH_BELONGS {
            if conj_into(h, k) {
                bits |= 1 << k as u8;
            }
        }
        ConjProfile(bits)
    }

    pub fn conj_into(self, kind: StandardKind) -> bool {
        self.0 >> kind as u8 & 1 == 1
    }

    /// Conjugate into `kind` and into nothing that `kind` excludes.
    pub fn belongs_to(self, kind: StandardKind) -> Result<bool> {
        let below = kind.excluded_below()?;
        Ok(self.conj_into(kind) && below.iter().all(|&k| !self.conj_into(k)))
    }
}

/// Conjugate into `kind` but into none of the smaller lattice kinds; for `Cr`,
/// conjugate into `Cr` but not into `Z`.
pub fn belongs_to(h: &MatGroup, kind: StandardKind) -> Result<bool> {
    let below = kind.excluded_below()?;
    Ok(conj_into(h, kind) && below.iter().all(|&k| !conj_into(h, k)))
}

pub fn belongs_to_cr(h: &MatGroup) -> bool {
    conj_into(h, StandardKind::Cr) && !conj_into(h, StandardKind::Z)
}

/// The cases of Dickson's classification of subgroups of `GL2(F_ell)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DicksonClass {
    /// Has an element of order `ell` and is conjugate into the Borel group.
    BorelWithEllElement,
    ContainsSL2,
    /// Conjugate into a Cartan group; cyclic image in `PGL2`.
    CartanCyclicImage,
    /// Conjugate into a Cartan normalizer but into no Cartan group.
    NormalizerDihedralImage,
    /// Image in `PGL2` isomorphic to `A4`, `S4` or `A5`.
    ExceptionalA4S4A5,
}

impl DicksonClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::BorelWithEllElement => "borel",
            Self::ContainsSL2 => "contains-SL2",
            Self::CartanCyclicImage => "cartan",
            Self::NormalizerDihedralImage => "normalizer",
            Self::ExceptionalA4S4A5 => "exceptional",
        }
    }
}

/// Order of the image of `h` in `PGL2`.
pub fn projective_order(h: &MatGroup) -> usize {
    h.order() / h.elements().iter().filter(|m| m.is_scalar()).count()
}

pub fn dickson_class(h: &MatGroup) -> DicksonClass {
    use StandardKind::*;
    if h.order() % h.ell() as usize == 0 {
        if conj_into(h, Borel) {
            DicksonClass::BorelWithEllElement
        } else {
            DicksonClass::ContainsSL2
        }
    } else if conj_into(h, Cs) || conj_into(h, Cns) {
        DicksonClass::CartanCyclicImage
    } else if conj_into(h, Ns) || conj_into(h, Nns) {
        DicksonClass::NormalizerDihedralImage
    } else {
        DicksonClass::ExceptionalA4S4A5
    }
}
