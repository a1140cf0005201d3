//! Builders for every regenerable table.

use clap::ValueEnum;
use galimage::catalog::{class_number, exceptional_primes};
use galimage::indexsets::{index_set_formula, torsion_divmin_formula, DeltaSet, ImageKind, TorsionMode};
use galimage::modarith::is_prime;
use galimage::standard::StandardKind;
use galimage::theorems::{CurveFilter, Engine, TorsionField};
use galimage::{Error, Result};

use crate::render::{Cell, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    /// S_M(ell), all curves.
    Rml,
    /// S_M(ell), CM curves.
    Rmcml,
    /// S_M(ell), non-CM curves.
    Rmnoncml,
    /// T(ell) for rational j, all three filters.
    Tjl,
    /// T_Q(ell) for curves over Q, all three filters.
    Tl,
    /// Odd degrees divisible by h(ell-1)/2 for CM curves.
    Cm,
    /// Index sets of the exceptional images.
    Eml,
    /// Closed-form index sets of the non-exceptional images.
    Setml,
    /// Torsion div-minima of the exceptional images.
    Eejl,
    /// Torsion div-minima of the non-exceptional images.
    Setl,
    /// Degrees of abelian sub-extensions, as a 0/1 grid.
    Grid,
}

impl TableName {
    pub const ALL: [TableName; 11] = [
        Self::Rml,
        Self::Rmcml,
        Self::Rmnoncml,
        Self::Tjl,
        Self::Tl,
        Self::Cm,
        Self::Eml,
        Self::Setml,
        Self::Eejl,
        Self::Setl,
        Self::Grid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rml => "rml",
            Self::Rmcml => "rmcml",
            Self::Rmnoncml => "rmnoncml",
            Self::Tjl => "tjl",
            Self::Tl => "tl",
            Self::Cm => "cm",
            Self::Eml => "eml",
            Self::Setml => "setml",
            Self::Eejl => "eejl",
            Self::Setl => "setl",
            Self::Grid => "grid",
        }
    }
}

/// Which primes (and degrees) a table covers.
#[derive(Clone, Debug, Default)]
pub struct Range {
    pub ells: Option<Vec<u64>>,
    pub ell_max: Option<u64>,
    pub d_max: Option<u64>,
}

/// Explicit rows of the headline tables plus spot primes for the generic rows.
const HEADLINE: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 37, 43];
const SETML: [u64; 5] = [3, 5, 7, 11, 13];

impl Range {
    fn primes(&self, default: &[u64]) -> Result<Vec<u64>> {
        let mut out = match (&self.ells, self.ell_max) {
            (Some(v), _) => v.clone(),
            (None, Some(max)) => (3..=max).filter(|&l| is_prime(l)).collect(),
            (None, None) => default.to_vec(),
        };
        for &l in &out {
            if l < 3 || !is_prime(l) {
                return Err(Error::NotOddPrime(l));
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

pub fn build(name: TableName, engine: &Engine, range: &Range) -> Result<Table> {
    match name {
        TableName::Rml => s_table(name, engine, &range.primes(&HEADLINE)?, CurveFilter::Any),
        TableName::Rmcml => s_table(name, engine, &range.primes(&HEADLINE)?, CurveFilter::Cm),
        TableName::Rmnoncml => s_table(name, engine, &range.primes(&HEADLINE)?, CurveFilter::NonCm),
        TableName::Tjl => t_table(name, engine, &range.primes(&HEADLINE)?, TorsionField::RationalJ),
        TableName::Tl => t_table(name, engine, &range.primes(&HEADLINE)?, TorsionField::OverQ),
        TableName::Cm => cm_table(engine, range),
        TableName::Eml => eml_table(engine, &range.primes(&exceptional_primes()?)?),
        TableName::Setml => setml_table(&range.primes(&SETML)?),
        TableName::Eejl => eejl_table(engine, &range.primes(&exceptional_primes()?)?),
        TableName::Setl => setl_table(&range.primes(&SETML)?),
        TableName::Grid => grid_table(engine, range),
    }
}

const S_KINDS: [StandardKind; 5] = [
    StandardKind::Z,
    StandardKind::Cs,
    StandardKind::Cns,
    StandardKind::Ns,
    StandardKind::Nns,
];

fn s_table(name: TableName, engine: &Engine, primes: &[u64], filter: CurveFilter) -> Result<Table> {
    let mut t = Table::new(name.name(), &["ℓ", "Z", "Cs", "Cns", "Ns", "Nns"]);
    for &ell in primes {
        let mut row = vec![Cell::Int(ell)];
        for m in S_KINDS {
            row.push(Cell::Set(engine.s_set(ell, m, filter)?));
        }
        t.push(row);
    }
    Ok(t)
}

fn t_table(name: TableName, engine: &Engine, primes: &[u64], field: TorsionField) -> Result<Table> {
    let mut t = Table::new(name.name(), &["ℓ", "all", "CM", "non-CM"]);
    for &ell in primes {
        let mut row = vec![Cell::Int(ell)];
        for filter in [CurveFilter::Any, CurveFilter::Cm, CurveFilter::NonCm] {
            row.push(Cell::Set(engine.t_set(ell, filter, field)?));
        }
        t.push(row);
    }
    Ok(t)
}

fn cm_table(engine: &Engine, range: &Range) -> Result<Table> {
    let primes: Vec<u64> = match &range.ells {
        Some(_) => range.primes(&[])?,
        None => {
            let max = range.ell_max.unwrap_or(83);
            (3..=max).filter(|&l| is_prime(l) && l % 4 == 3).collect()
        }
    };
    let mut t = Table::new("cm", &["ℓ", "h", "h(ℓ-1)/2", "T^CM", "degrees"]);
    for ell in primes {
        let v = engine.cm_odd_degree_verdict(ell)?;
        t.push(vec![
            Cell::Int(ell),
            Cell::Int(class_number(ell)?),
            Cell::Int(v.degree),
            Cell::Set(engine.t_set(ell, CurveFilter::Cm, TorsionField::RationalJ)?),
            Cell::text(if v.all { "all" } else { "none" }),
        ]);
    }
    Ok(t)
}

fn eml_table(engine: &Engine, primes: &[u64]) -> Result<Table> {
    let mut t = Table::new("eml", &["ℓ", "Z", "Cs", "Cns", "Ns", "Nns", "Cr"]);
    for &ell in primes {
        let mut row = vec![Cell::Int(ell)];
        for m in StandardKind::WITH_BELONGS {
            let set = engine.exceptional_index_set(ell, m)?;
            row.push(Cell::Delta(DeltaSet::compress(set.values())));
        }
        t.push(row);
    }
    Ok(t)
}

fn setml_table(primes: &[u64]) -> Result<Table> {
    let mut t = Table::new("setml", &["ℓ", "image", "M", "index set"]);
    for &ell in primes {
        for kind in ImageKind::ALL {
            for m in StandardKind::WITH_BELONGS {
                let set = index_set_formula(kind, m, ell)?;
                t.push(vec![
                    Cell::Int(ell),
                    Cell::text(kind.name()),
                    Cell::text(m.name()),
                    Cell::Delta(set.delta().cloned()),
                ]);
            }
        }
    }
    Ok(t)
}

fn eejl_table(engine: &Engine, primes: &[u64]) -> Result<Table> {
    let mut t = Table::new("eejl", &["ℓ", "twisted", "strict"]);
    for &ell in primes {
        t.push(vec![
            Cell::Int(ell),
            Cell::Set(engine.exceptional_torsion_set(ell, TorsionMode::Twisted)?.div_min()),
            Cell::Set(engine.exceptional_torsion_set(ell, TorsionMode::Strict)?.div_min()),
        ]);
    }
    Ok(t)
}

fn setl_table(primes: &[u64]) -> Result<Table> {
    let mut t = Table::new("setl", &["ℓ", "image", "twisted", "strict"]);
    for &ell in primes {
        for kind in ImageKind::ALL {
            // the Borel-type images only occur for ell = 3 mod 4
            if kind == ImageKind::BorelTrio && ell % 4 != 3 {
                continue;
            }
            t.push(vec![
                Cell::Int(ell),
                Cell::text(kind.name()),
                Cell::Set(torsion_divmin_formula(kind, TorsionMode::Twisted, ell)?),
                Cell::Set(torsion_divmin_formula(kind, TorsionMode::Strict, ell)?),
            ]);
        }
    }
    Ok(t)
}

fn grid_table(engine: &Engine, range: &Range) -> Result<Table> {
    let primes = match (&range.ells, range.ell_max) {
        (None, None) => Range { ell_max: Some(97), ..Range::default() }.primes(&[])?,
        _ => range.primes(&[])?,
    };
    let d_max = range.d_max.unwrap_or(45);
    if d_max == 0 {
        return Err(Error::NonPositive("d-max"));
    }
    let degrees: Vec<String> = (1..=d_max).map(|d| d.to_string()).collect();
    let mut columns = vec!["ℓ"];
    columns.extend(degrees.iter().map(String::as_str));
    let mut t = Table::new("grid", &columns);
    t.separator = " ";
    for ell in primes {
        let k = engine.k_set(ell, CurveFilter::Any)?;
        let mut row = vec![Cell::Int(ell)];
        row.extend((1..=d_max).map(|d| Cell::Bit(k.contains(&d))));
        t.push(row);
    }
    Ok(t)
}
