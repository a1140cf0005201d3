//! Acceptance criteria, one report line each.
//!
//! Run with `cargo test -p galimage-core --test acceptance`. Pass `-- --slow`
//! (or set `GALIMAGE_SLOW=1`) to add the ell = 17, 37 rows of the exceptional
//! index-set table.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use galimage::catalog::{class_number, pq_membership};
use galimage::indexsets::{
    image_index_set_bruteforce, index_set_formula, DeltaSet, ImageKind, TorsionMode,
};
use galimage::matgroup::{all_subgroups, twists, Mat2};
use galimage::modarith::{is_prime, PrimeCtx};
use galimage::standard::{
    belongs_to, conj_into, conj_into_bruteforce, dickson_class, projective_order, CanonicalGroups, DicksonClass,
    StandardKind,
};
use galimage::theorems::{CurveFilter, Engine, TorsionField};
use galimage::{EnumConfig, Exec};

use StandardKind::{Cns, Cs, Nns, Ns, Z};

type Outcome = Result<String, Vec<String>>;

fn canon(ell: u64) -> CanonicalGroups {
    CanonicalGroups::new(PrimeCtx::new(ell).unwrap())
}

fn set(v: &[u64]) -> BTreeSet<u64> {
    v.iter().copied().collect()
}

fn show(s: &BTreeSet<u64>) -> String {
    if s.is_empty() {
        return "∅".into();
    }
    s.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Printed entries of the exceptional index-set table: (lower, upper, excluded) or empty.
type Entry = Option<(&'static [u64], &'static [u64], &'static [u64])>;

fn exceptional_table() -> Vec<(u64, [Entry; 6])> {
    vec![
        (3, [
            Some((&[2], &[12, 16], &[])),
            Some((&[1], &[6, 8], &[])),
            Some((&[2], &[4], &[])),
            Some((&[1], &[4], &[])),
            Some((&[1], &[6, 8], &[])),
            Some((&[2], &[4], &[])),
        ]),
        (5, [
            Some((&[4], &[80, 96], &[])),
            Some((&[1], &[40, 48], &[3])),
            Some((&[2], &[12, 32], &[])),
            Some((&[1], &[12], &[])),
            Some((&[1], &[40, 48], &[5])),
            Some((&[4], &[16], &[])),
        ]),
        (7, [
            Some((&[6, 14, 16], &[72, 96, 252], &[])),
            Some((&[2, 3, 7], &[36, 48, 84, 126], &[])),
            Some((&[2], &[18, 24], &[])),
            Some((&[1], &[18, 24], &[])),
            Some((&[1], &[36, 48, 126], &[])),
            Some((&[2], &[26], &[])),
        ]),
        (11, [
            Some((&[24, 110], &[220, 240], &[])),
            Some((&[11, 12], &[44, 110, 120], &[])),
            Some((&[2], &[60, 80], &[])),
            Some((&[6], &[60], &[])),
            Some((&[1], &[110, 120], &[11, 22])),
            Some((&[10], &[20], &[])),
        ]),
        (13, [
            Some((&[24, 52], &[288, 1872], &[])),
            Some((&[6, 8, 13], &[96, 144, 624, 936], &[])),
            Some((&[12], &[36], &[])),
            Some((&[3, 4], &[36], &[])),
            Some((&[6, 26], &[144, 936], &[])),
            Some((&[4], &[144], &[])),
        ]),
        (17, [
            Some((&[272], &[1088], &[])),
            Some((&[17], &[544], &[])),
            None,
            None,
            Some((&[136], &[544], &[])),
            Some((&[16], &[64], &[])),
        ]),
        (37, [
            Some((&[1332], &[15984], &[])),
            Some((&[37], &[5328, 7992], &[])),
            None,
            None,
            Some((&[666], &[7992], &[])),
            Some((&[36], &[432], &[])),
        ]),
    ]
}

fn exceptional_index_sets(engine: &Engine, slow: bool) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (ell, row) in exceptional_table() {
        if ell > 13 && !slow {
            continue;
        }
        for (m, entry) in StandardKind::WITH_BELONGS.into_iter().zip(row) {
            let printed = match entry {
                Some((lo, up, ex)) => {
                    let d = DeltaSet::new(lo.iter().copied(), up.iter().copied()).unwrap();
                    let full = d.expand();
                    let d = d.excluding(ex.iter().copied()).unwrap();
                    for x in ex {
                        if !full.contains(x) {
                            bad.push(format!("ell={ell} {m}: excluded {x} not in the unexcluded Δ"));
                        }
                    }
                    (d.expand(), d.to_string())
                }
                None => (BTreeSet::new(), "∅".to_string()),
            };
            let got = engine.exceptional_index_set(ell, m).unwrap();
            checked += 1;
            if got.values() != &printed.0 {
                let missing: BTreeSet<_> = printed.0.difference(got.values()).copied().collect();
                let extra: BTreeSet<_> = got.values().difference(&printed.0).copied().collect();
                bad.push(format!(
                    "ell={ell} {m}: printed {} computed {got} (missing {}, extra {})",
                    printed.1,
                    show(&missing),
                    show(&extra)
                ));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} entries"))
    } else {
        Err(bad)
    }
}

fn formulas_vs_oracle() -> Outcome {
    let cfg = EnumConfig::default();
    let mut bad = Vec::new();
    let mut checked = 0;
    let plan: [(ImageKind, &[u64]); 4] = [
        (ImageKind::Gl2, &[3, 5]),
        (ImageKind::Ns, &[3, 5, 7, 11, 13]),
        (ImageKind::Nns, &[3, 5, 7, 11, 13]),
        (ImageKind::BorelTrio, &[3, 5, 7, 11, 13]),
    ];
    for (kind, primes) in plan {
        for &ell in primes {
            let c = canon(ell);
            for m in StandardKind::WITH_BELONGS {
                let formula = index_set_formula(kind, m, ell).unwrap();
                let brute = image_index_set_bruteforce(kind, m, &c, &cfg).unwrap();
                checked += 1;
                if formula.values() != brute.values() {
                    bad.push(format!("{kind} {m} ell={ell}: formula {formula} oracle {brute}"));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} (kind, M, ell) triples"))
    } else {
        Err(bad)
    }
}

/// Rows of the three `S_M` tables: columns Z, Cs, Cns, Ns, Nns.
fn s_row(ell: u64, filter: CurveFilter) -> [BTreeSet<u64>; 5] {
    let l = ell;
    let cm_row = || -> [Vec<u64>; 5] {
        let (in_p, in_q) = pq_membership(l).unwrap();
        if [3, 7, 11, 19, 43, 67, 163].contains(&l) {
            [vec![2 * (l - 1), 2 * l, 2 * (l + 1)], vec![2, l], vec![2], vec![1], vec![1]]
        } else if in_p {
            [vec![2 * (l - 1)], vec![2], vec![l - 1], vec![1], vec![(l - 1) / 2]]
        } else if in_q {
            [vec![2 * (l + 1)], vec![l + 1], vec![2], vec![(l + 1) / 2], vec![1]]
        } else {
            [vec![2 * (l - 1), 2 * (l + 1)], vec![2], vec![2], vec![1], vec![1]]
        }
    };
    let row: [Vec<u64>; 5] = match filter {
        CurveFilter::Any => match l {
            3 => [vec![2], vec![1], vec![2], vec![1], vec![1]],
            5 => [vec![4], vec![1], vec![2], vec![1], vec![1]],
            7 => [vec![6, 14, 16], vec![2, 3, 7], vec![2], vec![1], vec![1]],
            13 => [vec![24, 28, 52], vec![2, 13], vec![2], vec![1], vec![1]],
            17 => [vec![32, 36, 272], vec![2, 17], vec![2], vec![1], vec![1]],
            37 => [vec![72, 76, 1332], vec![2, 37], vec![2], vec![1], vec![1]],
            _ => cm_row(),
        },
        CurveFilter::Cm => cm_row(),
        CurveFilter::NonCm => match l {
            3 => [vec![2], vec![1], vec![2], vec![1], vec![1]],
            5 => [vec![4], vec![1], vec![2], vec![1], vec![1]],
            7 => [vec![6, 14, 16], vec![2, 3, 7], vec![2], vec![1], vec![1]],
            11 => [vec![24, 110], vec![11, 12], vec![2], vec![6], vec![1]],
            13 => [vec![24, 52], vec![6, 8, 13], vec![12], vec![3, 4], vec![6, 26]],
            17 => [vec![272], vec![17], vec![272], vec![153], vec![136]],
            37 => [vec![1332], vec![37], vec![1332], vec![703], vec![666]],
            _ => [
                vec![l * (l + 1) * (l - 1)],
                vec![l * (l + 1)],
                vec![l * (l - 1)],
                vec![l * (l + 1) / 2],
                vec![l * (l - 1) / 2],
            ],
        },
    };
    row.map(|v| set(&v))
}

/// Rows of the torsion tables: (T, T^CM, T^non-CM) for the given field.
fn t_row(ell: u64, field: TorsionField) -> [BTreeSet<u64>; 3] {
    let l = ell;
    let (_, in_q) = pq_membership(l).unwrap();
    let twisted = field == TorsionField::RationalJ;
    let row: [Vec<u64>; 3] = match (l, twisted) {
        (3, _) => [vec![1], vec![1], vec![1]],
        (5, true) => [vec![1], vec![4], vec![1]],
        (5, false) => [vec![1], vec![8], vec![1]],
        (7, _) => [vec![1], vec![3], vec![1]],
        (11, _) => [vec![5], vec![5], vec![5]],
        (13, true) => [vec![2, 3], vec![12], vec![2, 3]],
        (13, false) => [vec![3, 4], vec![24], vec![3, 4]],
        (17, true) => [vec![4], vec![16], vec![4]],
        (17, false) => [vec![8], vec![32], vec![8]],
        (37, true) => [vec![6], vec![36], vec![6]],
        (37, false) => [vec![12], vec![72], vec![12]],
        _ => {
            let gl2 = if twisted { (l * l - 1) / 2 } else { l * l - 1 };
            if [19, 43, 67, 163].contains(&l) {
                [vec![(l - 1) / 2], vec![(l - 1) / 2], vec![gl2]]
            } else if in_q {
                [vec![gl2], vec![gl2], vec![gl2]]
            } else {
                let ns = if twisted { l - 1 } else { 2 * (l - 1) };
                [vec![ns], vec![ns], vec![gl2]]
            }
        }
    };
    row.map(|v| set(&v))
}

fn headline_tables(engine: &Engine) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let kinds = [Z, Cs, Cns, Ns, Nns];
    for ell in [3u64, 5, 7, 11, 13, 17, 37, 19, 23, 43] {
        for filter in CurveFilter::ALL {
            let expected = s_row(ell, filter);
            for (m, want) in kinds.iter().zip(expected) {
                let got = engine.s_set(ell, *m, filter).unwrap();
                checked += 1;
                if got != want {
                    bad.push(format!("S_{m} ell={ell} {filter}: expected {} got {}", show(&want), show(&got)));
                }
            }
        }
        for field in [TorsionField::RationalJ, TorsionField::OverQ] {
            let expected = t_row(ell, field);
            let filters = [CurveFilter::Any, CurveFilter::Cm, CurveFilter::NonCm];
            for (filter, want) in filters.into_iter().zip(expected) {
                let got = engine.t_set(ell, filter, field).unwrap();
                checked += 1;
                if got != want {
                    bad.push(format!("T ell={ell} {filter} {field:?}: expected {} got {}", show(&want), show(&got)));
                }
            }
        }
    }
    let exceptional: [(u64, &[u64], &[u64]); 8] = [
        (3, &[1], &[1]),
        (5, &[1], &[1]),
        (7, &[1], &[1]),
        (11, &[5], &[5]),
        (13, &[2, 3], &[3, 4]),
        (17, &[4], &[8]),
        (37, &[6], &[12]),
        (19, &[], &[]),
    ];
    for (ell, tw, st) in exceptional {
        for (mode, want) in [
            (TorsionMode::Twisted, tw),
            (TorsionMode::Strict, st),
        ] {
            let got = engine.exceptional_torsion_set(ell, mode).unwrap().div_min();
            checked += 1;
            if got != set(want) {
                bad.push(format!("exceptional torsion ell={ell} {mode:?}: expected {} got {}", show(&set(want)), show(&got)));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} cells"))
    } else {
        Err(bad)
    }
}

const GRID_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn published_grid() -> Vec<Vec<bool>> {
    include_str!("data/grid.txt")
        .lines()
        .map(|line| line.split_whitespace().map(|b| b == "1").collect())
        .collect()
}

fn theorem2_grid(engine: &Engine) -> Outcome {
    let published = published_grid();
    assert_eq!(published.len(), GRID_PRIMES.len());
    let mut bad = Vec::new();
    for (row, &ell) in published.iter().zip(&GRID_PRIMES) {
        let k = engine.k_set(ell, CurveFilter::Any).unwrap();
        for (i, &light) in row.iter().enumerate() {
            let d = i as u64 + 1;
            if k.contains(&d) != light {
                bad.push(format!(
                    "(ell={ell}, d={d}): published {} computed {}",
                    if light { "light" } else { "dark" },
                    if k.contains(&d) { "light" } else { "dark" }
                ));
            }
        }
    }
    if bad.is_empty() {
        Ok("1080 bits".into())
    } else {
        Err(bad)
    }
}

fn cm_table(engine: &Engine) -> Outcome {
    let rows: [(u64, u64, u64, bool); 13] = [
        (3, 1, 1, true),
        (7, 3, 3, true),
        (11, 5, 5, true),
        (19, 9, 9, true),
        (23, 33, 22, false),
        (31, 45, 30, false),
        (43, 21, 21, true),
        (47, 115, 46, false),
        (59, 87, 58, false),
        (67, 33, 33, true),
        (71, 245, 70, false),
        (79, 195, 78, false),
        (83, 123, 82, false),
    ];
    let mut bad = Vec::new();
    let listed: Vec<u64> = (3..=83).filter(|&l| is_prime(l) && l % 4 == 3).collect();
    if listed != rows.iter().map(|r| r.0).collect::<Vec<_>>() {
        bad.push("row set differs from the primes 3 mod 4 up to 83".into());
    }
    for (ell, degree, t_cm, all) in rows {
        let v = engine.cm_odd_degree_verdict(ell).unwrap();
        let t = engine.t_set(ell, CurveFilter::Cm, TorsionField::RationalJ).unwrap();
        if v.degree != degree || v.all != all || t != set(&[t_cm]) {
            bad.push(format!(
                "ell={ell}: expected ({degree}, {}, {all}) got ({}, {}, {})",
                t_cm,
                v.degree,
                show(&t),
                v.all
            ));
        }
        let h = class_number(ell).unwrap();
        if (h == 1) != v.all {
            bad.push(format!("ell={ell}: h={h} but verdict all={}", v.all));
        }
    }
    if bad.is_empty() {
        Ok("13 rows".into())
    } else {
        Err(bad)
    }
}

fn pq_scan() -> Outcome {
    let start = Instant::now();
    let mut p = Vec::new();
    let mut q = Vec::new();
    for ell in (3..=38833).filter(|&l| is_prime(l)) {
        let (in_p, in_q) = pq_membership(ell).unwrap();
        if in_p {
            p.push(ell);
        }
        if in_q {
            q.push(ell);
        }
    }
    let mut bad = Vec::new();
    if p.iter().take(3).copied().collect::<Vec<_>>() != [15073, 18313, 38833] {
        bad.push(format!("P starts {:?}", &p[..p.len().min(3)]));
    }
    if q.iter().take(3).copied().collect::<Vec<_>>() != [3167, 8543, 14423] {
        bad.push(format!("Q starts {:?}", &q[..q.len().min(3)]));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 30.0 {
        bad.push(format!("scan took {secs:.1}s"));
    }
    if bad.is_empty() {
        Ok(format!("scan to 38833 in {secs:.2}s"))
    } else {
        Err(bad)
    }
}

fn property_suites() -> Outcome {
    let cfg = EnumConfig::default();
    let mut bad = Vec::new();
    let mut checks = 0usize;

    // Twists belong to the same standard subgroup as the group they twist.
    let c3 = canon(3);
    let c5 = canon(5);
    for g in [c5.get(Ns), c5.get(Nns), c3.get(StandardKind::Full)] {
        for h in all_subgroups(g, &cfg).unwrap() {
            for t in twists(&h) {
                for m in StandardKind::WITH_BELONGS {
                    checks += 1;
                    if belongs_to(&t, m).unwrap() != belongs_to(&h, m).unwrap() {
                        bad.push(format!("twist of {:?} differs on {m}", h.generators()));
                    }
                }
            }
        }
    }

    // A subgroup not inside an index-2 subgroup N meets it with index 2.
    let gl3 = all_subgroups(c3.get(StandardKind::Full), &cfg).unwrap();
    for n in gl3.iter().filter(|s| s.index() == 2) {
        for h in gl3.iter().filter(|h| !h.is_subgroup_of(n)) {
            checks += 1;
            if h.order() != 2 * h.intersection(n).order() {
                bad.push(format!("index-2 intersection fails for {:?}", h.generators()));
            }
        }
    }

    // Subgroups of Ns(5) containing the swap reach every order between theirs and |Ns|.
    let ns5 = c5.get(Ns);
    let swap = Mat2::new(5, 0, 1, 1, 0).unwrap();
    let subs = all_subgroups(ns5, &cfg).unwrap();
    for h in subs.iter().filter(|h| h.contains(&swap)) {
        let orders: BTreeSet<usize> = subs.iter().filter(|k| h.is_subgroup_of(k)).map(|k| k.order()).collect();
        let expected: BTreeSet<usize> =
            (1..=ns5.order()).filter(|d| d % h.order() == 0 && ns5.order() % d == 0).collect();
        checks += 1;
        if orders != expected {
            bad.push(format!("overgroup orders of {:?}", h.generators()));
        }
    }

    // Dickson classes cover every subgroup of GL2(5), each with its defining property.
    let full5 = c5.get(StandardKind::Full);
    let sl2 = 5 * 24;
    for h in all_subgroups(full5, &cfg).unwrap() {
        let ok = match dickson_class(&h) {
            DicksonClass::BorelWithEllElement => h.order() % 5 == 0 && conj_into(&h, StandardKind::Borel),
            DicksonClass::ContainsSL2 => h.elements().iter().filter(|x| x.det() == 1).count() == sl2,
            DicksonClass::CartanCyclicImage => conj_into(&h, Cs) || conj_into(&h, Cns),
            DicksonClass::NormalizerDihedralImage => {
                !conj_into(&h, Cs) && !conj_into(&h, Cns) && (conj_into(&h, Ns) || conj_into(&h, Nns))
            }
            DicksonClass::ExceptionalA4S4A5 => [12, 24, 60].contains(&projective_order(&h)),
        };
        checks += 1;
        if !ok {
            bad.push(format!("Dickson class of {:?}", h.generators()));
        }
    }

    // Subgroups of the Borel group with order prime to ell are conjugate into Cs.
    for ell in [3u64, 5, 7] {
        let c = canon(ell);
        for h in all_subgroups(c.get(StandardKind::Borel), &cfg).unwrap() {
            if h.order() % ell as usize != 0 {
                checks += 1;
                if !conj_into_bruteforce(&h, Cs, &c, Exec::default()) {
                    bad.push(format!("Borel subgroup {:?} at {ell} is not split", h.generators()));
                }
            }
        }
    }

    if bad.is_empty() {
        Ok(format!("{checks} checks"))
    } else {
        Err(bad)
    }
}

fn main() -> ExitCode {
    let slow = std::env::args().any(|a| a == "--slow") || std::env::var_os("GALIMAGE_SLOW").is_some();
    // `cargo test -- --list` probes test binaries; there is nothing to list.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let engine = Engine::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 exceptional index sets", Box::new(|| exceptional_index_sets(&engine, slow))),
        ("2 closed forms vs enumeration", Box::new(formulas_vs_oracle)),
        ("3 headline tables", Box::new(|| headline_tables(&engine))),
        ("4 abelian-extension grid", Box::new(|| theorem2_grid(&engine))),
        ("5 CM odd-degree table", Box::new(|| cm_table(&engine))),
        ("6 P/Q scan", Box::new(pq_scan)),
        ("7 property suites", Box::new(property_suites)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<32} {detail} ({secs:.2}s)"),
            Err(problems) => {
                failed += 1;
                println!("FAIL  {name:<32} {} problem(s) ({secs:.2}s)", problems.len());
                for p in problems {
                    println!("        {p}");
                }
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
