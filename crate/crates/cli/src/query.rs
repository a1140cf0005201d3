//! Answers to single degree questions.

use std::collections::BTreeSet;

use clap::ValueEnum;
use galimage::standard::StandardKind;
use galimage::theorems::{CurveFilter, Engine, TorsionField};
use galimage::Result;
use serde::Serialize;

use crate::render::{join_set, to_json, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Image belongs to M over a degree-d field.
    Thm1,
    /// Some degree-d subfield of the ell-torsion field has abelian co-extension.
    Thm2,
    /// A point of order ell over a degree-d field.
    Thm3,
}

#[derive(Clone, Debug)]
pub struct Query {
    pub theorem: Theorem,
    pub ell: u64,
    pub d: u64,
    pub m: StandardKind,
    pub filter: CurveFilter,
    pub field: TorsionField,
}

#[derive(Clone, Debug, Serialize)]
pub struct Answer {
    pub theorem: Theorem,
    pub ell: u64,
    pub d: u64,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<StandardKind>,
    pub filter: CurveFilter,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<TorsionField>,
    pub holds: bool,
    /// The element of the degree set that divides (thm1, thm3) or equals (thm2) `d`.
    pub witness: Option<u64>,
    /// The div-minimal degree set consulted; absent for thm2, whose set is exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<BTreeSet<u64>>,
}

pub fn answer(engine: &Engine, q: &Query) -> Result<Answer> {
    let mut a = Answer {
        theorem: q.theorem,
        ell: q.ell,
        d: q.d,
        m: None,
        filter: q.filter,
        field: None,
        holds: false,
        witness: None,
        set: None,
    };
    match q.theorem {
        Theorem::Thm1 => {
            a.m = Some(q.m);
            a.witness = engine.thm1(q.ell, q.d, q.m, q.filter)?;
            a.set = Some(engine.s_set(q.ell, q.m, q.filter)?);
        }
        Theorem::Thm2 => {
            a.witness = engine.thm2(q.ell, q.d, q.filter)?.then_some(q.d);
        }
        Theorem::Thm3 => {
            a.field = Some(q.field);
            a.witness = engine.thm3(q.ell, q.d, q.filter, q.field)?;
            a.set = Some(engine.t_set(q.ell, q.filter, q.field)?);
        }
    }
    a.holds = a.witness.is_some();
    Ok(a)
}

impl Answer {
    fn set_name(&self) -> String {
        let suffix = match self.filter {
            CurveFilter::Any => "",
            CurveFilter::Cm => "^CM",
            CurveFilter::NonCm => "^non-CM",
        };
        match (self.theorem, self.m, self.field) {
            (Theorem::Thm1, Some(m), _) => format!("S_{m}{suffix}({})", self.ell),
            (Theorem::Thm3, _, Some(TorsionField::OverQ)) => format!("T_Q{suffix}({})", self.ell),
            (Theorem::Thm3, _, _) => format!("T{suffix}({})", self.ell),
            _ => format!("K{suffix}({})", self.ell),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["theorem", "ell", "d", "holds", "witness", "set"]).expect("in-memory write");
                w.write_record([
                    format!("{:?}", self.theorem).to_lowercase(),
                    self.ell.to_string(),
                    self.d.to_string(),
                    self.holds.to_string(),
                    self.witness.map(|w| w.to_string()).unwrap_or_default(),
                    self.set.as_ref().map(join_set).unwrap_or_default(),
                ])
                .expect("in-memory write");
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            Format::Text => {
                let name = self.set_name();
                let detail = match (&self.set, self.witness) {
                    (Some(s), Some(w)) => format!("witness {w} in {name} = {{{}}}", join_set(s)),
                    (Some(s), None) => format!("no element of {name} = {{{}}} divides {}", join_set(s), self.d),
                    (None, Some(_)) => format!("{} ∈ {name}", self.d),
                    (None, None) => format!("{} ∉ {name}", self.d),
                };
                format!("{} ({detail})\n", self.holds)
            }
        }
    }
}
