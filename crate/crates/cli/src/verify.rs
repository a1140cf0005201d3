//! Closed forms and structural facts checked against subgroup enumeration.

use std::collections::BTreeSet;

use clap::ValueEnum;
use galimage::catalog::all_records;
use galimage::indexsets::{
    div_min, image_index_set_bruteforce, index_set_formula, summarize, torsion_divmin_formula,
    torsion_set_from_summaries, ImageKind, TorsionMode,
};
use galimage::matgroup::{all_subgroups, twists, MatGroup};
use galimage::modarith::{gl2_order, is_prime, PrimeCtx};
use galimage::standard::{
    belongs_to, conj_into, dickson_class, projective_order, CanonicalGroups, DicksonClass, StandardKind,
};
use galimage::{EnumConfig, Error, Result};
use serde::Serialize;

use crate::render::{to_json, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// Closed-form index sets against enumeration.
    Formulas,
    /// Torsion div-minima against enumeration.
    Torsion,
    /// Twists belong to the same standard subgroup as the group they twist.
    Twists,
    /// Every subgroup of GL2 lands in exactly one Dickson case.
    Dickson,
    /// Catalogued generators generate groups of the stated index.
    Catalog,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scope: Scope,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(scope: Scope, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Report {
            scope,
            passed,
            failed: checks.len() - passed,
            checks,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["check", "pass", "detail"]).expect("in-memory write");
                for c in &self.checks {
                    w.write_record([c.name.as_str(), if c.pass { "true" } else { "false" }, &c.detail])
                        .expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            Format::Text => {
                let mut out = String::new();
                for c in &self.checks {
                    let tag = if c.pass { "PASS" } else { "FAIL" };
                    out.push_str(&format!("{tag}  {}  {}\n", c.name, c.detail));
                }
                out.push_str(&format!("{} passed, {} failed\n", self.passed, self.failed));
                out
            }
        }
    }
}

fn check(name: String, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

/// Largest prime whose full `GL2` lattice is enumerated without `--slow`.
const GL2_FAST: u64 = 5;
const GL2_SLOW: u64 = 7;

pub fn run(scope: Scope, ells: Option<Vec<u64>>, slow: bool, cfg: &EnumConfig) -> Result<Report> {
    let default: &[u64] = match scope {
        Scope::Formulas | Scope::Torsion => &[3, 5, 7, 11, 13],
        _ => &[3, 5],
    };
    let ells = ells.unwrap_or_else(|| default.to_vec());
    for &l in &ells {
        if l < 3 || !is_prime(l) {
            return Err(Error::NotOddPrime(l));
        }
    }
    let gl2_max = if slow { GL2_SLOW } else { GL2_FAST };
    let checks = match scope {
        Scope::Formulas => formulas(&ells, gl2_max, cfg)?,
        Scope::Torsion => torsion(&ells, gl2_max, cfg)?,
        Scope::Twists => twist_invariance(&ells, slow, cfg)?,
        Scope::Dickson => dickson(&ells, cfg)?,
        Scope::Catalog => catalog()?,
    };
    Ok(Report::new(scope, checks))
}

fn kinds_at(ell: u64, gl2_max: u64) -> Vec<ImageKind> {
    ImageKind::ALL
        .into_iter()
        .filter(|&k| k != ImageKind::Gl2 || ell <= gl2_max)
        .collect()
}

fn canon(ell: u64) -> Result<CanonicalGroups> {
    Ok(CanonicalGroups::new(PrimeCtx::new(ell)?))
}

fn formulas(ells: &[u64], gl2_max: u64, cfg: &EnumConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &ell in ells {
        let c = canon(ell)?;
        for kind in kinds_at(ell, gl2_max) {
            for m in StandardKind::WITH_BELONGS {
                let formula = index_set_formula(kind, m, ell)?;
                let brute = image_index_set_bruteforce(kind, m, &c, cfg)?;
                out.push(check(
                    format!("{kind}/{m} ell={ell}"),
                    formula.values() == brute.values(),
                    format!("formula {formula}, enumeration {brute}"),
                ));
            }
        }
    }
    Ok(out)
}

fn show(s: &BTreeSet<u64>) -> String {
    crate::render::join_set(s)
}

fn torsion(ells: &[u64], gl2_max: u64, cfg: &EnumConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &ell in ells {
        let c = canon(ell)?;
        for kind in kinds_at(ell, gl2_max) {
            if kind == ImageKind::BorelTrio && ell % 4 != 3 {
                continue;
            }
            let summaries = kind
                .groups(&c)
                .into_iter()
                .map(|g| summarize(g, cfg))
                .collect::<Result<Vec<_>>>()?;
            for mode in [TorsionMode::Twisted, TorsionMode::Strict] {
                let mut values = BTreeSet::new();
                for s in &summaries {
                    values.extend(torsion_set_from_summaries(s, mode).values().iter().copied());
                }
                let brute = div_min(&values);
                let formula = torsion_divmin_formula(kind, mode, ell)?;
                out.push(check(
                    format!("{kind} {} ell={ell}", mode_name(mode)),
                    formula == brute,
                    format!("formula {}, enumeration {}", show(&formula), show(&brute)),
                ));
            }
        }
    }
    Ok(out)
}

fn mode_name(mode: TorsionMode) -> &'static str {
    match mode {
        TorsionMode::Twisted => "twisted",
        TorsionMode::Strict => "strict",
    }
}

fn twist_invariance(ells: &[u64], slow: bool, cfg: &EnumConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &ell in ells {
        let c = canon(ell)?;
        let mut groups: Vec<(&str, &MatGroup)> = vec![("Ns", c.get(StandardKind::Ns)), ("Nns", c.get(StandardKind::Nns))];
        // GL2(3) is cheap; larger full groups only with --slow
        if ell == 3 || slow && ell <= GL2_SLOW {
            groups.push(("GL2", c.get(StandardKind::Full)));
        }
        for (name, g) in groups {
            let subs = all_subgroups(g, cfg)?;
            let mut compared = 0usize;
            let mut bad = Vec::new();
            for h in &subs {
                for t in twists(h) {
                    for m in StandardKind::WITH_BELONGS {
                        compared += 1;
                        if belongs_to(&t, m)? != belongs_to(h, m)? {
                            bad.push(format!("{m} at {:?}", h.generators()));
                        }
                    }
                }
            }
            let detail = if bad.is_empty() {
                format!("{} subgroups, {compared} comparisons", subs.len())
            } else {
                format!("{} violations, first: {}", bad.len(), bad[0])
            };
            out.push(check(format!("twists of subgroups of {name}({ell})"), bad.is_empty(), detail));
        }
    }
    Ok(out)
}

fn dickson(ells: &[u64], cfg: &EnumConfig) -> Result<Vec<Check>> {
    use StandardKind::*;
    let mut out = Vec::new();
    for &ell in ells {
        let c = canon(ell)?;
        let sl2 = (ell * (ell * ell - 1)) as usize;
        let subs = all_subgroups(c.get(Full), cfg)?;
        let mut counts = [0usize; 5];
        let mut bad = Vec::new();
        for h in &subs {
            let class = dickson_class(h);
            let ok = match class {
                DicksonClass::BorelWithEllElement => h.order() % ell as usize == 0 && conj_into(h, Borel),
                DicksonClass::ContainsSL2 => h.elements().iter().filter(|x| x.det() == 1).count() == sl2,
                DicksonClass::CartanCyclicImage => conj_into(h, Cs) || conj_into(h, Cns),
                DicksonClass::NormalizerDihedralImage => {
                    !conj_into(h, Cs) && !conj_into(h, Cns) && (conj_into(h, Ns) || conj_into(h, Nns))
                }
                DicksonClass::ExceptionalA4S4A5 => [12, 24, 60].contains(&projective_order(h)),
            };
            counts[class as usize] += 1;
            if !ok {
                bad.push(format!("{} at {:?}", class.name(), h.generators()));
            }
        }
        let detail = if bad.is_empty() {
            format!(
                "{} subgroups: borel {}, sl2 {}, cartan {}, normalizer {}, exceptional {}",
                subs.len(),
                counts[0],
                counts[1],
                counts[2],
                counts[3],
                counts[4]
            )
        } else {
            format!("{} violations, first: {}", bad.len(), bad[0])
        };
        out.push(check(format!("Dickson cases of GL2({ell})"), bad.is_empty(), detail));
    }
    Ok(out)
}

fn catalog() -> Result<Vec<Check>> {
    let records = all_records()?;
    let mut out = vec![check(
        "record count".into(),
        records.len() == 63,
        format!("{} records", records.len()),
    )];
    for r in records {
        let order = r.generated_order();
        out.push(check(
            format!("line {} (ell={}, index {})", r.line, r.ell, r.index),
            r.is_consistent(),
            format!("order {order} × index {} vs |GL2| = {}", r.index, gl2_order(r.ell).ok_or(Error::Overflow(r.ell))?),
        ));
    }
    Ok(out)
}
