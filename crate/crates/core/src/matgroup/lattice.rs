//! Subgroup lattices of explicit matrix groups.
//!
//! Subgroups are grown from the trivial group by adjoining one cyclic
//! subgroup at a time. Work is organised by conjugacy classes inside the
//! ambient group: each class representative `K` is extended only by
//! representatives of the `N(K)`-orbits on cyclic subgroups, and every
//! result is looked up among the conjugates of the classes found so far.
//! Adjoining arbitrary (not only normalizing) cyclic subgroups is what lets
//! perfect subgroups such as `SL2(5)` appear.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::{MatGroup, Mat2, Subgroup};
use crate::exec::{EnumConfig, Exec};
use crate::Result;

const NONE: u32 = u32::MAX;
/// Largest group that gets a full multiplication table.
const TABLE_LIMIT: usize = 2048;
/// Largest `ell^4` for a dense key-to-index array.
const DENSE_LIMIT: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct Bits(Box<[u64]>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)].into_boxed_slice())
    }

    fn get(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: u32) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }
}

/// A subgroup of the ambient group in index form; `elems[0]` is the identity.
#[derive(Clone)]
pub(crate) struct Sub {
    bits: Bits,
    elems: Vec<u32>,
    gens: Vec<u32>,
}

enum Lookup {
    Dense(Vec<u32>),
    Sorted(Vec<u64>),
}

/// The ambient group with its elements numbered in sorted order.
pub(crate) struct Ambient {
    group: MatGroup,
    lookup: Lookup,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
    gens: Vec<u32>,
    identity: u32,
}

impl Ambient {
    pub(crate) fn new(group: &MatGroup) -> Self {
        let ell = group.ell() as u64;
        let elems = group.elements();
        let lookup = if ell.pow(4) <= DENSE_LIMIT {
            let mut v = vec![NONE; ell.pow(4) as usize];
            for (i, m) in elems.iter().enumerate() {
                v[m.key() as usize] = i as u32;
            }
            Lookup::Dense(v)
        } else {
            Lookup::Sorted(elems.iter().map(Mat2::key).collect())
        };
        let mut amb = Ambient {
            group: group.clone(),
            lookup,
            inv: Vec::new(),
            table: None,
            gens: Vec::new(),
            identity: 0,
        };
        amb.identity = amb.index(&Mat2::identity(group.ell()));
        amb.inv = elems.iter().map(|m| amb.index(&m.inv())).collect();
        amb.gens = group.generators().iter().map(|m| amb.index(m)).collect();
        let n = elems.len();
        if n <= TABLE_LIMIT {
            let mut t = Vec::with_capacity(n * n);
            for x in elems {
                for y in elems {
                    t.push(amb.index(&x.mul(y)));
                }
            }
            amb.table = Some(t);
        }
        amb
    }

    fn n(&self) -> usize {
        self.group.order()
    }

    fn elem(&self, i: u32) -> &Mat2 {
        &self.group.elements()[i as usize]
    }

    fn index(&self, m: &Mat2) -> u32 {
        let i = match &self.lookup {
            Lookup::Dense(v) => v[m.key() as usize],
            Lookup::Sorted(keys) => keys.binary_search(&m.key()).map_or(NONE, |i| i as u32),
        };
        assert!(i != NONE, "{m:?} is outside the ambient group");
        i
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        match &self.table {
            Some(t) => t[x as usize * self.n() + y as usize],
            None => self.index(&self.elem(x).mul(self.elem(y))),
        }
    }

    /// `g x g^-1`.
    fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv[g as usize])
    }

    fn trivial(&self) -> Sub {
        let mut bits = Bits::new(self.n());
        bits.set(self.identity);
        Sub {
            bits,
            elems: vec![self.identity],
            gens: Vec::new(),
        }
    }

    /// `<K, x>` by coset enumeration over right cosets of `K`.
    fn join(&self, k: &Sub, x: u32) -> Sub {
        if k.bits.get(x) {
            return k.clone();
        }
        let mut gens = k.gens.clone();
        gens.push(x);
        let mut bits = k.bits.clone();
        let mut elems = k.elems.clone();
        let block = k.elems.len();
        let add_coset = |r: u32, bits: &mut Bits, elems: &mut Vec<u32>| {
            for i in 0..block {
                let y = self.mul(k.elems[i], r);
                bits.set(y);
                elems.push(y);
            }
        };
        add_coset(x, &mut bits, &mut elems);
        let mut rep = block;
        while rep < elems.len() {
            let r = elems[rep];
            for &s in &gens {
                let y = self.mul(r, s);
                if !bits.get(y) {
                    add_coset(y, &mut bits, &mut elems);
                }
            }
            rep += block;
        }
        Sub { bits, elems, gens }
    }

    fn conjugate(&self, g: u32, k: &Sub) -> Sub {
        let mut bits = Bits::new(self.n());
        let elems: Vec<u32> = k.elems.iter().map(|&x| self.conj(g, x)).collect();
        for &y in &elems {
            bits.set(y);
        }
        let gens = k.gens.iter().map(|&x| self.conj(g, x)).collect();
        Sub { bits, elems, gens }
    }

    fn conjugate_bits(&self, g: u32, k: &Sub) -> Bits {
        let mut bits = Bits::new(self.n());
        for &x in &k.elems {
            bits.set(self.conj(g, x));
        }
        bits
    }

    /// `N(K) = {g : g K g^-1 = K}`.
    fn normalizer(&self, k: &Sub, exec: Exec) -> Vec<u32> {
        exec.filter_range(self.n(), |g| k.gens.iter().all(|&x| k.bits.get(self.conj(g, x))))
    }

    fn to_group(&self, k: &Sub) -> MatGroup {
        let mut elems: Vec<u32> = k.elems.clone();
        elems.sort_unstable();
        MatGroup::from_parts(
            self.group.ctx(),
            elems.iter().map(|&i| *self.elem(i)).collect(),
            k.gens.iter().map(|&i| *self.elem(i)).collect(),
        )
    }
}

/// Cyclic subgroups of the ambient group, each with one generator.
struct Cyclics {
    gens: Vec<u32>,
    /// For every element, the cyclic subgroup it generates.
    of: Vec<u32>,
}

impl Cyclics {
    fn new(amb: &Ambient) -> Self {
        let n = amb.n();
        let mut of = vec![NONE; n];
        let mut gens = Vec::new();
        for x in 0..n as u32 {
            if of[x as usize] != NONE {
                continue;
            }
            let id = gens.len() as u32;
            gens.push(x);
            let mut powers = vec![amb.identity];
            let mut p = x;
            while p != amb.identity {
                powers.push(p);
                p = amb.mul(p, x);
            }
            let ord = powers.len() as u64;
            for (k, &y) in powers.iter().enumerate() {
                if crate::modarith::gcd(k as u64, ord) == 1 {
                    of[y as usize] = id;
                }
            }
        }
        Cyclics { gens, of }
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// One conjugacy class of subgroups inside the ambient group.
struct Class {
    rep: Sub,
    /// `conjugators[i] K conjugators[i]^-1` runs over the class without repeats.
    conjugators: Vec<u32>,
}

/// All subgroups of a group, organised by conjugacy class.
pub struct SubgroupLattice {
    amb: Ambient,
    classes: Vec<Class>,
}

/// A conjugacy class of subgroups: a representative and the class size.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: Subgroup,
    pub size: usize,
}

impl SubgroupLattice {
    /// Enumerates every subgroup of `g`, failing if `|g|` exceeds the budget.
    pub fn new(g: &MatGroup, cfg: &EnumConfig) -> Result<Self> {
        cfg.check(g.order())?;
        let amb = Ambient::new(g);
        let cyc = Cyclics::new(&amb);
        let mut classes = vec![Class {
            rep: amb.trivial(),
            conjugators: vec![amb.identity],
        }];
        let mut index: HashMap<u64, Vec<(u32, u32)>> = HashMap::new();
        index.insert(classes[0].rep.bits.fingerprint(), vec![(0, amb.identity)]);

        let mut next = 0;
        while next < classes.len() {
            let k = classes[next].rep.clone();
            next += 1;
            if k.elems.len() == amb.n() {
                continue;
            }
            let norm = amb.normalizer(&k, cfg.exec);
            // a small generating set of N(K) over K
            let mut span = k.clone();
            let mut ngens = Vec::new();
            for &g in &norm {
                if !span.bits.get(g) {
                    span = amb.join(&span, g);
                    ngens.push(g);
                }
                if span.elems.len() == norm.len() {
                    break;
                }
            }
            let mut parent: Vec<u32> = (0..cyc.gens.len() as u32).collect();
            for (c, &x) in cyc.gens.iter().enumerate() {
                if k.bits.get(x) {
                    continue;
                }
                for &g in &ngens {
                    let d = cyc.of[amb.conj(g, x) as usize];
                    let (a, b) = (find(&mut parent, c as u32), find(&mut parent, d));
                    if a != b {
                        parent[a.max(b) as usize] = a.min(b);
                    }
                }
            }
            for (c, &x) in cyc.gens.iter().enumerate() {
                if k.bits.get(x) || find(&mut parent, c as u32) != c as u32 {
                    continue;
                }
                let h = amb.join(&k, x);
                if lookup(&amb, &classes, &index, &h.bits).is_none() {
                    let id = classes.len() as u32;
                    let conjugators = orbit(&amb, &h, id, &mut index);
                    classes.push(Class { rep: h, conjugators });
                }
            }
        }
        Ok(SubgroupLattice { amb, classes })
    }

    pub fn group(&self) -> &MatGroup {
        &self.amb.group
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn subgroup_count(&self) -> usize {
        self.classes.iter().map(|c| c.conjugators.len()).sum()
    }

    fn wrap(&self, k: &Sub) -> Subgroup {
        Subgroup::with_parent_order(self.amb.to_group(k), self.amb.n())
    }

    /// One representative per conjugacy class, in discovery order
    /// (nondecreasing in the number of cyclic generators).
    pub fn classes(&self) -> Vec<SubgroupClass> {
        self.classes
            .iter()
            .map(|c| SubgroupClass {
                rep: self.wrap(&c.rep),
                size: c.conjugators.len(),
            })
            .collect()
    }

    /// Every subgroup exactly once.
    pub fn all(&self) -> Vec<Subgroup> {
        let mut out = Vec::with_capacity(self.subgroup_count());
        for c in &self.classes {
            for &g in &c.conjugators {
                out.push(self.wrap(&self.amb.conjugate(g, &c.rep)));
            }
        }
        out
    }
}

fn lookup(amb: &Ambient, classes: &[Class], index: &HashMap<u64, Vec<(u32, u32)>>, bits: &Bits) -> Option<u32> {
    let hits = index.get(&bits.fingerprint())?;
    hits.iter()
        .find(|&&(c, g)| amb.conjugate_bits(g, &classes[c as usize].rep) == *bits)
        .map(|&(c, _)| c)
}

/// Registers every conjugate of `h` under class `id`; returns the conjugators.
fn orbit(amb: &Ambient, h: &Sub, id: u32, index: &mut HashMap<u64, Vec<(u32, u32)>>) -> Vec<u32> {
    let mut members: HashSet<Bits> = HashSet::from([h.bits.clone()]);
    let mut conjugators = vec![amb.identity];
    index.entry(h.bits.fingerprint()).or_default().push((id, amb.identity));
    let mut i = 0;
    while i < conjugators.len() {
        let c = conjugators[i];
        for &s in &amb.gens {
            let sc = amb.mul(s, c);
            let bits = amb.conjugate_bits(sc, h);
            if !members.contains(&bits) {
                index.entry(bits.fingerprint()).or_default().push((id, sc));
                members.insert(bits);
                conjugators.push(sc);
            }
        }
        i += 1;
    }
    conjugators
}

/// Every subgroup of `g` exactly once.
pub fn all_subgroups(g: &MatGroup, cfg: &EnumConfig) -> Result<Vec<Subgroup>> {
    Ok(SubgroupLattice::new(g, cfg)?.all())
}

/// One representative of each conjugacy class of subgroups of `g`.
pub fn subgroup_classes(g: &MatGroup, cfg: &EnumConfig) -> Result<Vec<SubgroupClass>> {
    Ok(SubgroupLattice::new(g, cfg)?.classes())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::matgroup::{twists, Mat2};
    use crate::modarith::PrimeCtx;
    use crate::standard::{CanonicalGroups, StandardKind};

    type Key = Vec<Mat2>;

    fn keys(subs: &[Subgroup]) -> BTreeSet<Key> {
        subs.iter().map(|s| s.elements().to_vec()).collect()
    }

    /// Every subset of the group that is closed under products.
    fn naive_subsets(g: &MatGroup) -> BTreeSet<Key> {
        let e = g.elements();
        assert!(e.len() <= 16);
        let mut out = BTreeSet::new();
        for mask in 1u32..1 << e.len() {
            let set: Vec<Mat2> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
            let closed = set
                .iter()
                .all(|x| set.iter().all(|y| set.binary_search(&x.mul(y)).is_ok()));
            if closed {
                out.insert(set);
            }
        }
        out
    }

    /// Closures of all generating sets with at most three elements.
    fn naive_closures(g: &MatGroup) -> BTreeSet<Key> {
        let e = g.elements();
        assert!(e.len() <= 48);
        let mut out = BTreeSet::new();
        for i in 0..e.len() {
            for j in i..e.len() {
                for k in j..e.len() {
                    let h = MatGroup::closure(g.ctx(), &[e[i], e[j], e[k]]).unwrap();
                    out.insert(h.elements().to_vec());
                }
            }
        }
        out
    }

    fn canon(ell: u64) -> CanonicalGroups {
        CanonicalGroups::new(PrimeCtx::new(ell).unwrap())
    }

    #[test]
    fn split_normalizer_mod_3_has_ten_subgroups() {
        let c = canon(3);
        let ns = c.get(StandardKind::Ns);
        let subs = all_subgroups(ns, &EnumConfig::default()).unwrap();
        assert_eq!(subs.len(), 10);
        assert_eq!(keys(&subs), naive_subsets(ns));
        assert_eq!(keys(&subs).len(), subs.len());
    }

    #[test]
    fn minus_identity_has_two_subgroups() {
        let ctx = PrimeCtx::new(5).unwrap();
        let g = MatGroup::closure(ctx, &[Mat2::neg_identity(5)]).unwrap();
        assert_eq!(all_subgroups(&g, &EnumConfig::default()).unwrap().len(), 2);
    }

    #[test]
    fn order_sixteen_group_matches_subset_search() {
        let c = canon(3);
        let nns = c.get(StandardKind::Nns);
        let subs = all_subgroups(nns, &EnumConfig::default()).unwrap();
        assert_eq!(keys(&subs), naive_subsets(nns));
    }

    #[test]
    fn gl2_mod_3_matches_naive_enumeration() {
        let c = canon(3);
        let full = c.get(StandardKind::Full);
        for exec in [Exec::Sequential, Exec::Parallel] {
            let cfg = EnumConfig { exec, ..EnumConfig::default() };
            let lattice = SubgroupLattice::new(full, &cfg).unwrap();
            let subs = lattice.all();
            assert_eq!(subs.len(), lattice.subgroup_count());
            assert_eq!(keys(&subs).len(), subs.len());
            assert_eq!(keys(&subs), naive_closures(full));
            for s in &subs {
                assert!(s.verify_closed());
                assert_eq!(s.index() * s.order() as u64, 48);
            }
        }
    }

    #[test]
    fn classes_partition_the_subgroups() {
        let c = canon(5);
        let full = c.get(StandardKind::Full);
        let lattice = SubgroupLattice::new(full, &EnumConfig::default()).unwrap();
        let classes = lattice.classes();
        let total: usize = classes.iter().map(|c| c.size).sum();
        assert_eq!(total, lattice.subgroup_count());
        // SL2(5) is perfect and only reachable by adjoining non-normalizing cyclics
        assert!(classes.iter().any(|c| c.rep.order() == 120
            && c.rep.elements().iter().all(|m| m.det() == 1)));
        for cl in &classes {
            let n = cl.rep.order();
            let normalizer = full
                .elements()
                .iter()
                .filter(|g| cl.rep.generators().iter().all(|h| cl.rep.contains(&h.conj_by(g))))
                .count();
            assert_eq!(cl.size * normalizer, full.order(), "order {n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = canon(5);
        let err = all_subgroups(c.get(StandardKind::Full), &EnumConfig::with_budget(100)).unwrap_err();
        assert_eq!(err, crate::Error::BudgetExceeded { order: 480, budget: 100 });
    }

    #[test]
    fn index_two_intersections() {
        let c = canon(3);
        let full = c.get(StandardKind::Full);
        let subs = all_subgroups(full, &EnumConfig::default()).unwrap();
        let index_two: Vec<&Subgroup> = subs.iter().filter(|s| s.index() == 2).collect();
        assert!(!index_two.is_empty());
        for h in &subs {
            for n in &index_two {
                if !h.is_subgroup_of(n) {
                    assert_eq!(h.order(), 2 * h.intersection(n).order());
                }
            }
        }
    }

    #[test]
    fn overgroup_orders_in_split_normalizer_fill_the_divisor_interval() {
        let c = canon(5);
        let ns = c.get(StandardKind::Ns);
        let swap = Mat2::new(5, 0, 1, 1, 0).unwrap();
        let subs = all_subgroups(ns, &EnumConfig::default()).unwrap();
        for h in subs.iter().filter(|h| h.contains(&swap)) {
            let orders: BTreeSet<usize> = subs
                .iter()
                .filter(|k| h.is_subgroup_of(k))
                .map(|k| k.order())
                .collect();
            let expected: BTreeSet<usize> = (1..=ns.order())
                .filter(|d| d % h.order() == 0 && ns.order() % d == 0)
                .collect();
            assert_eq!(orders, expected, "{:?}", h.generators());
        }
    }

    #[test]
    fn twist_count_matches_index_two_subgroups() {
        let c = canon(5);
        let cs = c.get(StandardKind::Cs);
        let t = cs.with_neg_identity();
        let naive = all_subgroups(&t, &EnumConfig::default())
            .unwrap()
            .into_iter()
            .filter(|s| s.index() == 2 && !s.contains_neg_identity())
            .count();
        assert_eq!(twists(cs).len(), naive + 1);
    }
}
