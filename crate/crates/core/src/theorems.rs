//! The assembled degree sets and the three degree criteria built on them.
//!
//! For a CM curve the image is one of the normalizer or Borel-type groups
//! picked by [`cm_profile`], and its index sets come from closed forms. For
//! a non-CM curve the image is `GL2` (closed form) or one of the catalogued
//! exceptional groups, whose subgroups are enumerated.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::catalog::{class_number, cm_profile, exceptional_groups};
use crate::exec::EnumConfig;
use crate::indexsets::{
    div_min, index_set_formula, index_set_from_summaries, some_divides, summarize, torsion_divmin_formula,
    torsion_set_from_summaries, ClassSummary, ImageKind, IndexSet, Provenance, TorsionMode,
};
use crate::modarith::require_odd_prime;
use crate::standard::StandardKind;
use crate::{Error, Result};

/// Which curves a degree set ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveFilter {
    Any,
    Cm,
    NonCm,
}

impl CurveFilter {
    pub const ALL: [CurveFilter; 3] = [Self::Any, Self::Cm, Self::NonCm];

    pub fn name(self) -> &'static str {
        match self {
            Self::Any => "any",
            Self::Cm => "cm",
            Self::NonCm => "non-cm",
        }
    }

    fn cm(self) -> bool {
        self != Self::NonCm
    }

    fn non_cm(self) -> bool {
        self != Self::Cm
    }
}

impl fmt::Display for CurveFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveFilter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "any" | "all" => Ok(Self::Any),
            "cm" => Ok(Self::Cm),
            "non-cm" | "noncm" => Ok(Self::NonCm),
            _ => Err(format!("unknown curve filter `{s}` (any, cm, non-cm)")),
        }
    }
}

/// Where the curve lives: over a field with only `j` rational, or over `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsionField {
    /// `E/K` with `j(E)` rational: twists allowed.
    RationalJ,
    /// `E/Q` base-changed to `K`.
    OverQ,
}

impl TorsionField {
    pub fn mode(self) -> TorsionMode {
        match self {
            Self::RationalJ => TorsionMode::Twisted,
            Self::OverQ => TorsionMode::Strict,
        }
    }
}

impl FromStr for TorsionField {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rational-j" | "j" => Ok(Self::RationalJ),
            "over-q" | "q" => Ok(Self::OverQ),
            _ => Err(format!("unknown torsion field `{s}` (rational-j, over-q)")),
        }
    }
}

/// All degree sets for one prime and filter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSets {
    pub ell: u64,
    pub filter: CurveFilter,
    /// `E_M` for each kind with a `belongs to` notion.
    pub e: BTreeMap<StandardKind, BTreeSet<u64>>,
    /// `S_M = div-min E_M`.
    pub s: BTreeMap<StandardKind, BTreeSet<u64>>,
    pub k: BTreeSet<u64>,
    pub t: BTreeSet<u64>,
    pub t_q: BTreeSet<u64>,
}

/// Verdict on the odd degrees divisible by `h * (ell - 1) / 2` for CM curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CmOddVerdict {
    pub ell: u64,
    pub class_number: u64,
    /// `h * (ell - 1) / 2`.
    pub degree: u64,
    pub all: bool,
}

type Summaries = Arc<Vec<Vec<ClassSummary>>>;
type Slot = Arc<OnceLock<Result<Summaries>>>;

/// Computes degree sets, caching the subgroup summaries of exceptional images.
pub struct Engine {
    cfg: EnumConfig,
    cache: Mutex<HashMap<u64, Slot>>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(EnumConfig::default())
    }
}

impl Engine {
    pub fn new(cfg: EnumConfig) -> Self {
        Engine {
            cfg,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &EnumConfig {
        &self.cfg
    }

    /// Subgroup summaries for every exceptional image at `ell`, one list per record.
    ///
    /// Concurrent callers asking for the same prime wait for one computation.
    fn exceptional(&self, ell: u64) -> Result<Summaries> {
        let cell = self.cache.lock().unwrap().entry(ell).or_default().clone();
        cell.get_or_init(|| {
            let mut all = Vec::new();
            for rec in exceptional_groups(ell)? {
                all.push(summarize(&rec.group()?, &self.cfg)?);
            }
            Ok(Arc::new(all))
        })
        .clone()
    }

    /// `I(Excep(ell); M)`, the union over the catalogued exceptional images.
    pub fn exceptional_index_set(&self, ell: u64, m: StandardKind) -> Result<IndexSet> {
        m.excluded_below()?;
        let mut values = BTreeSet::new();
        for s in self.exceptional(ell)?.iter() {
            values.extend(index_set_from_summaries(s, m)?.values().iter().copied());
        }
        Ok(IndexSet::from_values(values, Provenance::BruteForce))
    }

    /// `I(Excep(ell))` or `I_Q(Excep(ell))`.
    pub fn exceptional_torsion_set(&self, ell: u64, mode: TorsionMode) -> Result<IndexSet> {
        let mut values = BTreeSet::new();
        for s in self.exceptional(ell)?.iter() {
            values.extend(torsion_set_from_summaries(s, mode).values().iter().copied());
        }
        Ok(IndexSet::from_values(values, Provenance::BruteForce))
    }

    /// `E_M(ell)` restricted to `filter`.
    pub fn e_set(&self, ell: u64, m: StandardKind, filter: CurveFilter) -> Result<BTreeSet<u64>> {
        require_odd_prime(ell)?;
        m.excluded_below()?;
        let mut out = BTreeSet::new();
        if filter.cm() {
            for kind in cm_profile(ell)?.image_kinds {
                out.extend(index_set_formula(kind, m, ell)?.values().iter().copied());
            }
        }
        if filter.non_cm() {
            out.extend(self.exceptional_index_set(ell, m)?.values().iter().copied());
            out.extend(index_set_formula(ImageKind::Gl2, m, ell)?.values().iter().copied());
        }
        Ok(out)
    }

    /// `S_M(ell) = div-min E_M(ell)`.
    pub fn s_set(&self, ell: u64, m: StandardKind, filter: CurveFilter) -> Result<BTreeSet<u64>> {
        Ok(div_min(&self.e_set(ell, m, filter)?))
    }

    /// `K(ell) = E_Z ∪ E_Cs ∪ E_Cns ∪ E_Cr`, as exact degrees.
    pub fn k_set(&self, ell: u64, filter: CurveFilter) -> Result<BTreeSet<u64>> {
        let mut out = BTreeSet::new();
        for m in [StandardKind::Z, StandardKind::Cs, StandardKind::Cns, StandardKind::Cr] {
            out.extend(self.e_set(ell, m, filter)?);
        }
        Ok(out)
    }

    /// `T(ell)` (rational `j`) or `T_Q(ell)` (over `Q`): div-minima of the torsion index sets.
    pub fn t_set(&self, ell: u64, filter: CurveFilter, field: TorsionField) -> Result<BTreeSet<u64>> {
        require_odd_prime(ell)?;
        let mode = field.mode();
        let mut out = BTreeSet::new();
        if filter.cm() {
            for kind in cm_profile(ell)?.image_kinds {
                out.extend(torsion_divmin_formula(kind, mode, ell)?);
            }
        }
        if filter.non_cm() {
            out.extend(self.exceptional_torsion_set(ell, mode)?.div_min());
            out.extend(torsion_divmin_formula(ImageKind::Gl2, mode, ell)?);
        }
        Ok(div_min(&out))
    }

    pub fn degree_sets(&self, ell: u64, filter: CurveFilter) -> Result<DegreeSets> {
        let mut e = BTreeMap::new();
        let mut s = BTreeMap::new();
        for m in StandardKind::WITH_BELONGS {
            let set = self.e_set(ell, m, filter)?;
            s.insert(m, div_min(&set));
            e.insert(m, set);
        }
        let k = [StandardKind::Z, StandardKind::Cs, StandardKind::Cns, StandardKind::Cr]
            .iter()
            .flat_map(|m| e[m].iter().copied())
            .collect();
        Ok(DegreeSets {
            ell,
            filter,
            e,
            s,
            k,
            t: self.t_set(ell, filter, TorsionField::RationalJ)?,
            t_q: self.t_set(ell, filter, TorsionField::OverQ)?,
        })
    }

    /// Degree-`d` fields where the image can belong to `M`: the witness `s | d`, if any.
    pub fn thm1(&self, ell: u64, d: u64, m: StandardKind, filter: CurveFilter) -> Result<Option<u64>> {
        positive(d)?;
        Ok(some_divides(&self.s_set(ell, m, filter)?, d))
    }

    /// Whether some degree-`d` subfield of the `ell`-torsion field has abelian co-extension.
    pub fn thm2(&self, ell: u64, d: u64, filter: CurveFilter) -> Result<bool> {
        positive(d)?;
        Ok(self.k_set(ell, filter)?.contains(&d))
    }

    /// Degree-`d` fields where a point of order `ell` can appear: the witness `t | d`, if any.
    pub fn thm3(&self, ell: u64, d: u64, filter: CurveFilter, field: TorsionField) -> Result<Option<u64>> {
        positive(d)?;
        Ok(some_divides(&self.t_set(ell, filter, field)?, d))
    }

    /// Whether CM curves with rational `j` reach an `ell`-torsion point over
    /// fields of every, or no, odd degree divisible by `h * (ell - 1) / 2`.
    ///
    /// The odd multiples of `h (ell - 1) / 2` all pass or all fail together
    /// once the least of them is decided, so it is the one tested.
    pub fn cm_odd_degree_verdict(&self, ell: u64) -> Result<CmOddVerdict> {
        let h = class_number(ell)?;
        let degree = h * (ell - 1) / 2;
        let all = self.thm3(ell, degree, CurveFilter::Cm, TorsionField::RationalJ)?.is_some();
        Ok(CmOddVerdict {
            ell,
            class_number: h,
            degree,
            all,
        })
    }
}

fn positive(d: u64) -> Result<()> {
    if d == 0 {
        Err(Error::NonPositive("d"))
    } else {
        Ok(())
    }
}
