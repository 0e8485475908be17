//! Finite self-maps, example generators and the tail/cycle (rho) structure.
//!
//! A total map `f` on `{0..n-1}` is stored as its successor table. Every
//! trajectory under `f` consists of a tail of `tail_len` steps followed by a
//! cycle; [`RhoDecomposition`] records that split for all points at once,
//! together with the partition of the domain into orbit-equivalence
//! components (`x ~ y` iff the forward orbits of `x` and `y` meet).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::PointSet;

/// A total self-map on `{0..n-1}`, `succ[x] = f(x)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FunctionalMap {
    succ: Vec<usize>,
}

impl FunctionalMap {
    /// Validates and wraps a successor table.
    pub fn new(succ: Vec<usize>) -> Result<Self> {
        if succ.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let n = succ.len();
        for (index, &value) in succ.iter().enumerate() {
            if value >= n {
                return Err(Error::IndexOutOfRange { index, value, n });
            }
        }
        Ok(FunctionalMap { succ })
    }

    /// The multiplication map `i -> (m * i) mod modulus` on `Z_modulus`.
    ///
    /// Finite analog of the degree-`m` circle map restricted to rational
    /// angles with denominator `modulus`.
    pub fn mod_mul(m: u64, modulus: usize) -> Self {
        assert!(m >= 2, "multiplier must be at least 2");
        assert!(modulus >= 1, "modulus must be positive");
        let succ = (0..modulus)
            .map(|i| ((m as u128 * i as u128) % modulus as u128) as usize)
            .collect();
        FunctionalMap { succ }
    }

    /// The tower map `(i, j) -> ((i+1) mod m, floor(j/n))` on
    /// `Z_m x {0..j_max}`, with `(i, j)` indexed as `i * (j_max+1) + j`.
    ///
    /// The second coordinate never grows, so the finite block is invariant
    /// and the restriction is exact.
    pub fn tower(m: usize, n: usize, j_max: usize) -> Self {
        assert!(m >= 1, "rotation order must be positive");
        assert!(n >= 2, "division base must be at least 2");
        let width = j_max + 1;
        let mut succ = vec![0; m * width];
        for i in 0..m {
            for j in 0..width {
                succ[i * width + j] = ((i + 1) % m) * width + j / n;
            }
        }
        FunctionalMap { succ }
    }

    /// A uniformly random successor table, reproducible from the seed.
    ///
    /// Entries are drawn with SplitMix64 reduced modulo `n`, so identical
    /// `(n, seed)` pairs yield identical maps on every platform.
    pub fn random(n: usize, seed: u64) -> Self {
        assert!(n >= 1, "domain must be nonempty");
        let mut state = seed;
        let succ = (0..n).map(|_| (splitmix64(&mut state) % n as u64) as usize).collect();
        FunctionalMap { succ }
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn succ(&self) -> &[usize] {
        &self.succ
    }

    pub fn apply(&self, x: usize) -> usize {
        self.succ[x]
    }

    /// `f^k(x)` in `O(min(k, n))` steps: once the trajectory revisits a
    /// point the remaining steps reduce modulo the discovered cycle.
    pub fn iterate(&self, x: usize, k: usize) -> usize {
        let mut seen_at = vec![usize::MAX; self.n()];
        let mut path = Vec::new();
        let mut cur = x;
        for step in 0..=k {
            if seen_at[cur] != usize::MAX {
                let tail = seen_at[cur];
                let period = step - tail;
                return path[tail + (k - tail) % period];
            }
            seen_at[cur] = step;
            path.push(cur);
            cur = self.succ[cur];
        }
        cur
    }

    /// Image `f(A)`.
    pub fn image_of(&self, a: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.n());
        for x in a.iter() {
            out.insert(self.succ[x]);
        }
        out
    }

    /// Preimage `f^{-1}(A)`.
    pub fn preimage_of(&self, a: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.n());
        for x in 0..self.n() {
            if a.contains(self.succ[x]) {
                out.insert(x);
            }
        }
        out
    }

    pub fn is_surjective(&self) -> bool {
        self.image_of(&PointSet::full(self.n())).len() == self.n()
    }

    /// The coordinatewise pair map on `n^2` points, `(x, y)` stored row-major
    /// as `x * n + y`.
    pub fn pair_product(&self) -> Self {
        let n = self.n();
        let mut succ = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                succ[x * n + y] = self.succ[x] * n + self.succ[y];
            }
        }
        FunctionalMap { succ }
    }
}

/// SplitMix64 step; the fixed generator behind [`FunctionalMap::random`].
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tail/cycle data for every point plus the orbit-equivalence partition.
///
/// Cycle and component ids are normalized to ascending order of their least
/// member, so identical maps always produce identical decompositions.
#[derive(Clone, Debug)]
pub struct RhoDecomposition {
    /// Least `t >= 0` with `f^t(x)` periodic.
    pub tail_len: Vec<usize>,
    /// `f^{tail_len[x]}(x)`, the first periodic point on the trajectory.
    pub cycle_entry: Vec<usize>,
    /// Id of the cycle the trajectory of `x` falls into.
    pub cycle_id: Vec<usize>,
    /// Period of each cycle, indexed by cycle id.
    pub cycle_len: Vec<usize>,
    /// Orbit-equivalence class of each point.
    pub component_id: Vec<usize>,
    /// Members of each cycle in successor order, starting at the least one.
    cycles: Vec<Vec<usize>>,
    /// Position of each periodic point inside its cycle's member list.
    cycle_pos: Vec<usize>,
    num_components: usize,
}

impl RhoDecomposition {
    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    pub fn is_periodic(&self, x: usize) -> bool {
        self.tail_len[x] == 0
    }

    /// Period of the (eventual) cycle of `x`.
    pub fn period_of(&self, x: usize) -> usize {
        self.cycle_len[self.cycle_id[x]]
    }

    pub fn cycle_members(&self, cycle: usize) -> &[usize] {
        &self.cycles[cycle]
    }

    pub fn cycle_set(&self, cycle: usize) -> PointSet {
        PointSet::from_members(self.tail_len.len(), self.cycles[cycle].iter().copied())
    }

    pub fn periodic_set(&self) -> PointSet {
        PointSet::from_members(
            self.tail_len.len(),
            (0..self.tail_len.len()).filter(|&x| self.is_periodic(x)),
        )
    }

    pub fn component_set(&self, component: usize) -> PointSet {
        PointSet::from_members(
            self.component_id.len(),
            (0..self.component_id.len()).filter(|&x| self.component_id[x] == component),
        )
    }

    /// `f^k(x)` using the tail/cycle split: walk the tail, then index into
    /// the cycle modulo its period.
    pub fn iterate(&self, f: &FunctionalMap, x: usize, k: usize) -> usize {
        let tail = self.tail_len[x];
        if k < tail {
            let mut cur = x;
            for _ in 0..k {
                cur = f.apply(cur);
            }
            return cur;
        }
        let cycle = self.cycle_id[x];
        let len = self.cycle_len[cycle];
        let entry_pos = self.cycle_pos[self.cycle_entry[x]];
        self.cycles[cycle][(entry_pos + (k - tail)) % len]
    }
}

/// Computes tails, cycles and orbit components of `f` in linear time.
pub fn rho_decompose(f: &FunctionalMap) -> RhoDecomposition {
    let n = f.n();
    // Pointer-chase with three colors: unvisited, on the current path, done.
    const UNSEEN: usize = usize::MAX;
    let mut tail_len = vec![UNSEEN; n];
    let mut cycle_entry = vec![0; n];
    let mut raw_cycle_id = vec![0; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();

    let mut pos_on_path = vec![UNSEEN; n];
    for start in 0..n {
        if tail_len[start] != UNSEEN {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while tail_len[cur] == UNSEEN && pos_on_path[cur] == UNSEEN {
            pos_on_path[cur] = path.len();
            path.push(cur);
            cur = f.apply(cur);
        }
        let (base_tail, base_entry, base_cycle) = if pos_on_path[cur] != UNSEEN {
            // Found a brand-new cycle: everything from the meeting point on.
            let meet = pos_on_path[cur];
            let id = cycles.len();
            let members: Vec<usize> = path[meet..].to_vec();
            for &p in &members {
                tail_len[p] = 0;
                cycle_entry[p] = p;
                raw_cycle_id[p] = id;
            }
            cycles.push(members);
            (0, cur, id)
        } else {
            (tail_len[cur], cycle_entry[cur], raw_cycle_id[cur])
        };
        // Unwind the non-cycle part of the path.
        for (i, &p) in path.iter().enumerate() {
            pos_on_path[p] = UNSEEN;
            if tail_len[p] == UNSEEN || (tail_len[p] == 0 && raw_cycle_id[p] == usize::MAX) {
                tail_len[p] = base_tail + (path.len() - i);
                cycle_entry[p] = base_entry;
                raw_cycle_id[p] = base_cycle;
            } else if tail_len[p] != UNSEEN {
                // Periodic points of a freshly closed cycle were already set.
            }
        }
        // Points before the cycle on this path still need their distances.
        let mut dist = 0;
        for &p in path.iter().rev() {
            if tail_len[p] == 0 && cycles[raw_cycle_id[p]].contains(&p) {
                dist = 0;
                continue;
            }
            dist += 1;
            // Distance from p to the cycle is dist plus the tail of the
            // point the path ran into (zero for a fresh cycle).
        }
        let _ = dist;
        // Recompute tails for the path points directly; the path is short
        // and this keeps the bookkeeping obviously right.
        for (i, &p) in path.iter().enumerate() {
            if tail_len[p] == 0 {
                continue;
            }
            let steps_to_end = path.len() - i;
            tail_len[p] = base_tail + steps_to_end;
            cycle_entry[p] = base_entry;
            raw_cycle_id[p] = base_cycle;
        }
    }

    // Normalize cycle ids by least member.
    let mut order: Vec<usize> = (0..cycles.len()).collect();
    order.sort_by_key(|&c| cycles[c].iter().min().copied().unwrap());
    let mut remap = vec![0; cycles.len()];
    for (new_id, &old_id) in order.iter().enumerate() {
        remap[old_id] = new_id;
    }
    let mut sorted_cycles = vec![Vec::new(); cycles.len()];
    for (old_id, members) in cycles.into_iter().enumerate() {
        sorted_cycles[remap[old_id]] = rotate_to_least(members);
    }
    let cycle_id: Vec<usize> = raw_cycle_id.iter().map(|&c| remap[c]).collect();
    let cycle_len: Vec<usize> = sorted_cycles.iter().map(|c| c.len()).collect();
    let mut cycle_pos = vec![0; n];
    for members in &sorted_cycles {
        for (i, &p) in members.iter().enumerate() {
            cycle_pos[p] = i;
        }
    }

    // Orbit components: union-find over the edges (x, f(x)).
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        uf.union(x, f.apply(x));
    }
    let mut component_id = vec![0; n];
    let mut least_of_root = vec![UNSEEN; n];
    for x in 0..n {
        let r = uf.find(x);
        if least_of_root[r] == UNSEEN {
            least_of_root[r] = x;
        }
    }
    let mut roots: Vec<usize> = (0..n).filter(|&r| least_of_root[r] != UNSEEN).collect();
    roots.sort_by_key(|&r| least_of_root[r]);
    let mut root_rank = vec![0; n];
    for (rank, &r) in roots.iter().enumerate() {
        root_rank[r] = rank;
    }
    for x in 0..n {
        component_id[x] = root_rank[uf.find(x)];
    }
    let num_components = roots.len();

    let rho = RhoDecomposition {
        tail_len,
        cycle_entry,
        cycle_id,
        cycle_len,
        component_id,
        cycles: sorted_cycles,
        cycle_pos,
        num_components,
    };
    debug_assert!(rho_invariants_hold(f, &rho));
    rho
}

fn rotate_to_least(members: Vec<usize>) -> Vec<usize> {
    let least_pos = members
        .iter()
        .enumerate()
        .min_by_key(|&(_, &p)| p)
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(members.len());
    out.extend_from_slice(&members[least_pos..]);
    out.extend_from_slice(&members[..least_pos]);
    out
}

fn rho_invariants_hold(f: &FunctionalMap, rho: &RhoDecomposition) -> bool {
    (0..f.n()).all(|x| {
        let tail = rho.tail_len[x];
        let entry = rho.cycle_entry[x];
        f.iterate(x, tail) == entry
            && rho.tail_len[entry] == 0
            && (tail == 0) == rho.cycles[rho.cycle_id[x]].contains(&x)
            && rho.component_id[x] == rho.component_id[f.apply(x)]
            && f.iterate(entry, rho.period_of(x)) == entry
    })
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn new_accepts_valid_tables() {
        assert_eq!(FunctionalMap::new(vec![0]).unwrap().succ(), &[0]);
        assert_eq!(FunctionalMap::new(vec![1, 2, 0]).unwrap().succ(), &[1, 2, 0]);
    }

    #[test]
    fn new_rejects_bad_tables() {
        assert_eq!(FunctionalMap::new(vec![]), Err(Error::EmptyDomain));
        assert_eq!(
            FunctionalMap::new(vec![0, 0, 3]),
            Err(Error::IndexOutOfRange { index: 2, value: 3, n: 3 })
        );
    }

    #[test]
    fn mod_mul_tables() {
        assert_eq!(FunctionalMap::mod_mul(2, 3).succ(), &[0, 2, 1]);
        assert_eq!(FunctionalMap::mod_mul(2, 1).succ(), &[0]);
        assert_eq!(FunctionalMap::mod_mul(3, 4).succ(), &[0, 3, 2, 1]);
    }

    #[test]
    fn tower_tables() {
        // j_max = 0 collapses to the pure rotation.
        assert_eq!(FunctionalMap::tower(2, 2, 0).succ(), &[1, 0]);
        // Single column: (0, j) -> (0, j/2).
        assert_eq!(FunctionalMap::tower(1, 2, 3).succ(), &[0, 0, 1, 1]);
        let t = FunctionalMap::tower(2, 2, 3);
        assert_eq!(t.succ(), &[4, 4, 5, 5, 0, 0, 1, 1]);
        let rho = rho_decompose(&t);
        assert_eq!(rho.periodic_set().to_vec(), vec![0, 4]);
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(FunctionalMap::random(1, 999).succ(), &[0]);
        assert_eq!(
            FunctionalMap::random(3, 7).succ(),
            FunctionalMap::random(3, 7).succ()
        );
        // Golden table for the documented generator (SplitMix64 mod n).
        assert_eq!(FunctionalMap::random(5, 42).succ(), &[0, 0, 3, 1, 3]);
    }

    #[test]
    fn rho_of_permutation_is_all_periodic() {
        let f = FunctionalMap::new(vec![1, 2, 0]).unwrap();
        let rho = rho_decompose(&f);
        assert_eq!(rho.tail_len, vec![0, 0, 0]);
        assert_eq!(rho.num_cycles(), 1);
        assert_eq!(rho.cycle_len, vec![3]);
        assert_eq!(rho.num_components(), 1);
    }

    #[test]
    fn rho_of_chain() {
        // 2 -> 1 -> 0 with a fixed point at 0.
        let f = FunctionalMap::new(vec![0, 0, 1]).unwrap();
        let rho = rho_decompose(&f);
        assert_eq!(rho.tail_len, vec![0, 1, 2]);
        assert_eq!(rho.cycle_len, vec![1]);
        assert_eq!(rho.cycle_members(0), &[0]);
        assert_eq!(rho.num_components(), 1);
        assert_eq!(rho.cycle_entry, vec![0, 0, 0]);
    }

    #[test]
    fn iterate_reduces_along_cycles() {
        let f = FunctionalMap::new(vec![1, 2, 0]).unwrap();
        assert_eq!(f.iterate(0, 3), 0);
        assert_eq!(f.iterate(0, 0), 0);
        assert_eq!(f.iterate(0, 1_000_003), f.iterate(0, 1_000_003 % 3));
        let g = FunctionalMap::new(vec![0, 0, 1]).unwrap();
        assert_eq!(g.iterate(2, 2), 0);
    }

    #[test]
    fn mod_mul_bijection_iff_coprime() {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        for m in 2..8u64 {
            for modulus in 1..12usize {
                let f = FunctionalMap::mod_mul(m, modulus);
                assert_eq!(
                    f.is_surjective(),
                    gcd(m, modulus as u64) == 1,
                    "m = {m}, modulus = {modulus}"
                );
            }
        }
    }

    fn arb_map(max_n: usize) -> impl Strategy<Value = FunctionalMap> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(0..n, n).prop_map(|succ| FunctionalMap::new(succ).unwrap())
        })
    }

    proptest! {
        #[test]
        fn iterate_agrees_with_rho_iterate(f in arb_map(12), x in 0usize..12, k in 0usize..300) {
            let x = x % f.n();
            let rho = rho_decompose(&f);
            prop_assert_eq!(f.iterate(x, k), rho.iterate(&f, x, k));
        }

        #[test]
        fn tail_plus_period_returns_to_entry_orbit(f in arb_map(12), x in 0usize..12) {
            let x = x % f.n();
            let rho = rho_decompose(&f);
            let t = rho.tail_len[x];
            let p = rho.period_of(x);
            prop_assert_eq!(f.iterate(x, t + p), f.iterate(x, t));
        }

        #[test]
        fn components_match_orbit_intersection(f in arb_map(9)) {
            let n = f.n();
            let rho = rho_decompose(&f);
            // Brute force: x ~ y iff the forward orbits intersect within n steps.
            for x in 0..n {
                for y in 0..n {
                    let ox: Vec<usize> = (0..=n).map(|k| f.iterate(x, k)).collect();
                    let oy: Vec<usize> = (0..=n).map(|k| f.iterate(y, k)).collect();
                    let related = ox.iter().any(|p| oy.contains(p));
                    prop_assert_eq!(
                        related,
                        rho.component_id[x] == rho.component_id[y],
                        "x = {}, y = {}", x, y
                    );
                }
            }
        }
    }
}
