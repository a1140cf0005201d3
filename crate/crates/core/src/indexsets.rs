//! Divisor intervals `Δ(L|U)`, index sets of subgroups and their closed forms.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exec::EnumConfig;
use crate::matgroup::{fixes_nonzero_vector, twists, MatGroup, SubgroupLattice};
use crate::modarith::{divisors, nu2, prime_profile, require_odd_prime};
use crate::standard::{CanonicalGroups, ConjProfile, StandardKind};
use crate::{Error, Result};

/// `{n : r | n | s for some r in lower, s in upper} \ exclude`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaSet {
    lower: Vec<u64>,
    upper: Vec<u64>,
    exclude: Vec<u64>,
}

fn sorted(v: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let set: BTreeSet<u64> = v.into_iter().collect();
    set.into_iter().collect()
}

impl DeltaSet {
    pub fn new(lower: impl IntoIterator<Item = u64>, upper: impl IntoIterator<Item = u64>) -> Result<Self> {
        let (lower, upper) = (sorted(lower), sorted(upper));
        if lower.is_empty() || upper.is_empty() {
            return Err(Error::EmptyBounds);
        }
        if lower[0] == 0 || upper[0] == 0 {
            return Err(Error::NonPositive("divisor interval bound"));
        }
        Ok(DeltaSet {
            lower,
            upper,
            exclude: Vec::new(),
        })
    }

    /// Removes `exclude`, each of which must be a member.
    pub fn excluding(mut self, exclude: impl IntoIterator<Item = u64>) -> Result<Self> {
        for n in exclude {
            if !self.contains(n) {
                return Err(Error::DeadExclusion(n));
            }
            self.exclude.push(n);
        }
        self.exclude = sorted(self.exclude);
        Ok(self)
    }

    pub fn lower(&self) -> &[u64] {
        &self.lower
    }

    pub fn upper(&self) -> &[u64] {
        &self.upper
    }

    pub fn exclude(&self) -> &[u64] {
        &self.exclude
    }

    pub fn contains(&self, n: u64) -> bool {
        n > 0
            && self.lower.iter().any(|r| n % r == 0)
            && self.upper.iter().any(|s| s % n == 0)
            && self.exclude.binary_search(&n).is_err()
    }

    pub fn expand(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for &s in &self.upper {
            for n in divisors(s).expect("positive upper bound") {
                if self.contains(n) {
                    out.insert(n);
                }
            }
        }
        out
    }

    /// The tightest description of a nonempty finite set: div-minima below,
    /// div-maxima above, and whatever else falls in between excluded.
    pub fn compress(set: &BTreeSet<u64>) -> Option<Self> {
        if set.is_empty() {
            return None;
        }
        let d = DeltaSet::new(div_min(set), div_max(set)).ok()?;
        let extra: Vec<u64> = d.expand().difference(set).copied().collect();
        d.excluding(extra).ok()
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for DeltaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ({}|{})", join(&self.lower), join(&self.upper))?;
        if !self.exclude.is_empty() {
            write!(f, "∖{{{}}}", join(&self.exclude))?;
        }
        Ok(())
    }
}

/// `Δ(lower|upper)`.
pub fn delta(lower: &[u64], upper: &[u64]) -> Result<DeltaSet> {
    DeltaSet::new(lower.iter().copied(), upper.iter().copied())
}

/// Elements with no proper divisor in the set.
pub fn div_min(s: &BTreeSet<u64>) -> BTreeSet<u64> {
    s.iter()
        .copied()
        .filter(|&n| !s.iter().any(|&m| m != n && n % m == 0))
        .collect()
}

/// Elements with no proper multiple in the set.
pub fn div_max(s: &BTreeSet<u64>) -> BTreeSet<u64> {
    s.iter()
        .copied()
        .filter(|&n| !s.iter().any(|&m| m != n && m % n == 0))
        .collect()
}

/// Whether some element of `s` divides `d`.
pub fn some_divides(s: &BTreeSet<u64>, d: u64) -> Option<u64> {
    s.iter().copied().find(|&t| d % t == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    BruteForce,
    Formula,
}

/// A finite set of indices, with the `Δ` description it was built from or
/// compressed to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    values: BTreeSet<u64>,
    delta: Option<DeltaSet>,
    provenance: Provenance,
}

impl IndexSet {
    pub fn from_values(values: BTreeSet<u64>, provenance: Provenance) -> Self {
        let delta = DeltaSet::compress(&values);
        IndexSet {
            values,
            delta,
            provenance,
        }
    }

    pub fn from_delta(delta: Option<DeltaSet>, provenance: Provenance) -> Self {
        let values = delta.as_ref().map(DeltaSet::expand).unwrap_or_default();
        IndexSet {
            values,
            delta,
            provenance,
        }
    }

    pub fn empty(provenance: Provenance) -> Self {
        IndexSet::from_delta(None, provenance)
    }

    pub fn values(&self) -> &BTreeSet<u64> {
        &self.values
    }

    pub fn delta(&self) -> Option<&DeltaSet> {
        self.delta.as_ref()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.values.contains(&n)
    }

    pub fn div_min(&self) -> BTreeSet<u64> {
        div_min(&self.values)
    }

    /// Union as plain sets; the description is recompressed.
    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let values = self.values.union(&other.values).copied().collect();
        let provenance = if self.provenance == other.provenance {
            self.provenance
        } else {
            Provenance::BruteForce
        };
        IndexSet::from_values(values, provenance)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.delta {
            Some(d) => d.fmt(f),
            None => f.write_str("∅"),
        }
    }
}

/// Whether a torsion point must be fixed by the group itself or only by a twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorsionMode {
    /// Some twist fixes a nonzero vector (curves with rational `j`).
    Twisted,
    /// The group itself fixes a nonzero vector (curves over the rationals).
    Strict,
}

/// Per-conjugacy-class facts about the subgroups of one group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassSummary {
    pub index: u64,
    pub order: usize,
    pub class_size: usize,
    pub profile: ConjProfile,
    pub strict_fix: bool,
    pub twisted_fix: bool,
}

/// Whether some twist of `h` fixes a nonzero vector.
///
/// `h` itself is a twist when it omits `-I`; otherwise the candidates are
/// the index-2 subgroups of `h` omitting `-I` (`<h,-I>` = `h` fixes nothing).
pub fn twist_fixes_vector(h: &MatGroup) -> bool {
    if fixes_nonzero_vector(h.generators()) {
        return true;
    }
    twists(h).iter().skip(1).any(|t| fixes_nonzero_vector(t.generators()))
}

/// Enumerates the subgroups of `g` and records, per conjugacy class, the
/// index, the standard-subgroup profile and the fixed-vector flags.
///
/// Every recorded property is invariant under conjugation, so class
/// representatives stand for all subgroups.
pub fn summarize(g: &MatGroup, cfg: &EnumConfig) -> Result<Vec<ClassSummary>> {
    let lattice = SubgroupLattice::new(g, cfg)?;
    let classes = lattice.classes();
    Ok(cfg.exec.map(&classes, |c| {
        let h = &c.rep;
        let strict_fix = fixes_nonzero_vector(h.generators());
        ClassSummary {
            index: h.index(),
            order: h.order(),
            class_size: c.size,
            profile: ConjProfile::of(h),
            strict_fix,
            twisted_fix: strict_fix || twist_fixes_vector(h),
        }
    }))
}

/// `{[G:H] : H belongs to M}` from class summaries.
pub fn index_set_from_summaries(summaries: &[ClassSummary], m: StandardKind) -> Result<IndexSet> {
    m.excluded_below()?;
    let mut values = BTreeSet::new();
    for s in summaries {
        if s.profile.belongs_to(m)? {
            values.insert(s.index);
        }
    }
    Ok(IndexSet::from_values(values, Provenance::BruteForce))
}

/// `{[G:H] : some twist of H (or H itself) fixes a nonzero vector}` from class summaries.
pub fn torsion_set_from_summaries(summaries: &[ClassSummary], mode: TorsionMode) -> IndexSet {
    let values = summaries
        .iter()
        .filter(|s| match mode {
            TorsionMode::Twisted => s.twisted_fix,
            TorsionMode::Strict => s.strict_fix,
        })
        .map(|s| s.index)
        .collect();
    IndexSet::from_values(values, Provenance::BruteForce)
}

/// `I(G; M)` by enumerating every subgroup of `G`.
pub fn index_set_bruteforce(g: &MatGroup, m: StandardKind, cfg: &EnumConfig) -> Result<IndexSet> {
    m.excluded_below()?;
    index_set_from_summaries(&summarize(g, cfg)?, m)
}

/// `I(G)` (twisted) or `I_Q(G)` (strict) by enumerating every subgroup of `G`.
pub fn torsion_index_set(g: &MatGroup, mode: TorsionMode, cfg: &EnumConfig) -> Result<IndexSet> {
    Ok(torsion_set_from_summaries(&summarize(g, cfg)?, mode))
}

/// The possible images of a curve, apart from the exceptional ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImageKind {
    Gl2,
    Ns,
    Nns,
    /// The three Borel-type images `G`, `H1`, `H2`, taken together.
    BorelTrio,
}

impl ImageKind {
    pub const ALL: [ImageKind; 4] = [Self::Gl2, Self::Ns, Self::Nns, Self::BorelTrio];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gl2 => "GL2",
            Self::Ns => "Ns",
            Self::Nns => "Nns",
            Self::BorelTrio => "G,H1,H2",
        }
    }

    /// The canonical groups making up this image kind.
    pub fn groups(self, canon: &CanonicalGroups) -> Vec<&MatGroup> {
        match self {
            Self::Gl2 => vec![canon.get(StandardKind::Full)],
            Self::Ns => vec![canon.get(StandardKind::Ns)],
            Self::Nns => vec![canon.get(StandardKind::Nns)],
            Self::BorelTrio => canon.borel_trio().to_vec(),
        }
    }
}

impl fmt::Display for ImageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn interval(lower: u64, upper: u64) -> Option<DeltaSet> {
    Some(DeltaSet::new([lower], [upper]).expect("positive bounds"))
}

fn family(lower: u64, numer: u64, qs: impl IntoIterator<Item = u64>) -> Option<DeltaSet> {
    Some(DeltaSet::new([lower], qs.into_iter().map(|q| numer / q)).expect("positive bounds"))
}

/// Closed form of `I(G; M)` for a non-exceptional image kind.
pub fn index_set_formula(kind: ImageKind, m: StandardKind, ell: u64) -> Result<IndexSet> {
    use ImageKind as I;
    use StandardKind as S;
    require_odd_prime(ell)?;
    let l = ell;
    let full = l * (l + 1) * (l - 1) * (l - 1);
    let pi = prime_profile(l - 1)?;
    let pi_odd_plus = prime_profile(l + 1)?.odd_primes;
    let two_adic = 1u64 << (nu2(l - 1)? + 1);
    let four_or_two = if (l - 1) % 4 == 0 { 4 } else { 2 };
    let cns_qs = || pi_odd_plus.iter().copied().chain([two_adic]);
    let ns_qs = || pi.odd_primes.iter().copied().chain([four_or_two]);
    let d = match (kind, m) {
        (I::Gl2, S::Z) => interval(l * (l + 1) * (l - 1), full),
        (I::Gl2, S::Cs) => family(l * (l + 1), full, pi.primes.clone()),
        (I::Gl2, S::Cns) => family(l * (l - 1), full, cns_qs()),
        (I::Gl2, S::Ns) => family(l * (l + 1) / 2, full / 2, ns_qs()),
        (I::Gl2, S::Nns) => interval(l * (l - 1) / 2, full / 2),
        (I::Gl2, S::Cr) => interval(l * l - 1, (l + 1) * (l - 1) * (l - 1)),

        (I::Ns, S::Z) => interval(2 * (l - 1), 2 * (l - 1) * (l - 1)),
        (I::Ns, S::Cs) => family(2, 2 * (l - 1) * (l - 1), pi.primes.clone()),
        (I::Ns, S::Cns) => interval(l - 1, (l - 1) * (l - 1) >> nu2(l - 1)?),
        (I::Ns, S::Ns) => family(1, (l - 1) * (l - 1), ns_qs()),
        (I::Ns, S::Nns) => interval((l - 1) / 2, (l - 1) * (l - 1)),
        (I::Ns, S::Cr) => None,

        (I::Nns, S::Z) => interval(2 * (l + 1), 2 * (l * l - 1)),
        (I::Nns, S::Cs) => interval(l + 1, l * l - 1),
        (I::Nns, S::Cns) => family(2, 2 * (l * l - 1), cns_qs()),
        (I::Nns, S::Ns) => interval((l + 1) / 2, (l * l - 1) >> nu2(l - 1)?),
        (I::Nns, S::Nns) => interval(1, l * l - 1),
        (I::Nns, S::Cr) => None,

        (I::BorelTrio, S::Z) => interval(2 * l, 2 * l * (l - 1)),
        (I::BorelTrio, S::Cs) => interval(l, l * (l - 1)),
        (I::BorelTrio, S::Cns) | (I::BorelTrio, S::Ns) => None,
        (I::BorelTrio, S::Nns) => interval(l, l * (l - 1)),
        (I::BorelTrio, S::Cr) => interval(2, 2 * (l - 1)),

        (_, S::Borel) | (_, S::Full) => {
            return Err(Error::NoFormula(format!("{kind} with {m}")));
        }
    };
    Ok(IndexSet::from_delta(d, Provenance::Formula))
}

/// Closed-form div-minima of the torsion index sets of a non-exceptional image kind.
pub fn torsion_divmin_formula(kind: ImageKind, mode: TorsionMode, ell: u64) -> Result<BTreeSet<u64>> {
    require_odd_prime(ell)?;
    let l = ell;
    let twisted = mode == TorsionMode::Twisted;
    let v = match kind {
        ImageKind::Gl2 | ImageKind::Nns => {
            if twisted {
                (l * l - 1) / 2
            } else {
                l * l - 1
            }
        }
        ImageKind::Ns => {
            if twisted {
                l - 1
            } else {
                2 * (l - 1)
            }
        }
        ImageKind::BorelTrio => {
            if l % 4 != 3 {
                return Err(Error::Hypothesis(format!(
                    "the Borel-type torsion formula needs ell = 3 mod 4, got {l}"
                )));
            }
            (l - 1) / 2
        }
    };
    Ok(BTreeSet::from([v]))
}

/// `I(G1, ..., Gk; M)` for a non-exceptional kind by brute force over its canonical groups.
pub fn image_index_set_bruteforce(
    kind: ImageKind,
    m: StandardKind,
    canon: &CanonicalGroups,
    cfg: &EnumConfig,
) -> Result<IndexSet> {
    let mut acc = IndexSet::empty(Provenance::BruteForce);
    for g in kind.groups(canon) {
        acc = acc.union(&index_set_bruteforce(g, m, cfg)?);
    }
    Ok(acc)
}
