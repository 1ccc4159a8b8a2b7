//! Explicit small-matroid kernel over bitmask-encoded subsets.
//!
//! A matroid is stored as its full basis family; every operator (rank,
//! closure, circuits, duality, cyclic flats, ...) is computed directly from
//! that family.  Ground sets are limited to 32 elements and the
//! subset-enumerating operators are exponential by design: this kernel
//! targets desk-scale instances where every answer is exact and checkable.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::descent::{BinarySequence, SequenceError};

/// Hard cap imposed by the `u32` subset encoding.
pub const MAX_GROUND_SIZE: usize = 32;

/// Ground sizes up to this use a precomputed full rank table (2^m bytes).
const RANK_TABLE_MAX: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground size must be between 1 and {MAX_GROUND_SIZE}, got {0}")]
    BadGroundSize(usize),
    #[error("basis list is empty")]
    NoBases,
    #[error("element {element} is outside the ground set 0..{ground_size}")]
    ElementOutOfRange { element: usize, ground_size: usize },
    #[error("bases have different sizes ({0} and {1})")]
    UnequalBasisSizes(usize, usize),
    #[error("basis exchange axiom fails for bases {0:?} and {1:?}")]
    ExchangeFailure(Vec<usize>, Vec<usize>),
    #[error("rank {rank} is impossible on a ground set of size {ground_size}")]
    BadRank { rank: usize, ground_size: usize },
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    BadEdge(usize, usize, usize),
    #[error("{0:?} is not a circuit-hyperplane")]
    NotCircuitHyperplane(Vec<usize>),
    #[error("circuit-hyperplane candidates {0:?} and {1:?} share {2} elements; at most d-1 allowed")]
    HyperplanesTooClose(Vec<usize>, Vec<usize>, usize),
    #[error("circuit-hyperplane candidate {0:?} must have exactly d+1 = {1} elements")]
    BadHyperplaneSize(Vec<usize>, usize),
    #[error("duplicate circuit-hyperplane {0:?}")]
    DuplicateHyperplane(Vec<usize>),
    #[error(transparent)]
    BadSequence(#[from] SequenceError),
}

/// Subset of the ground set encoded as a bitmask.
pub fn mask_from_elements(elements: &[usize], ground_size: usize) -> Result<u32, MatroidError> {
    let mut mask = 0u32;
    for &e in elements {
        if e >= ground_size {
            return Err(MatroidError::ElementOutOfRange { element: e, ground_size });
        }
        mask |= 1 << e;
    }
    Ok(mask)
}

/// Ascending element list of a bitmask.
pub fn elements_from_mask(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// A matroid on `{0, .., ground_size-1}` given by its bases.
#[derive(Clone)]
pub struct Matroid {
    ground_size: usize,
    rank: usize,
    bases: Vec<u32>,
    rank_table: OnceLock<Vec<u8>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground_size == other.ground_size && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground_size", &self.ground_size)
            .field("rank", &self.rank)
            .field("bases", &self.basis_sets())
            .finish()
    }
}

impl Matroid {
    /// Build from explicit bases given as element lists, validating the
    /// exchange axiom.
    pub fn from_bases(ground_size: usize, bases: &[Vec<usize>]) -> Result<Self, MatroidError> {
        let masks = bases
            .iter()
            .map(|b| mask_from_elements(b, ground_size))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_basis_masks(ground_size, masks)
    }

    /// Build from bitmask bases, validating the exchange axiom.
    pub fn from_basis_masks(ground_size: usize, masks: Vec<u32>) -> Result<Self, MatroidError> {
        let m = Self::from_basis_masks_unchecked(ground_size, masks)?;
        m.validate_exchange()?;
        Ok(m)
    }

    /// Build without the exchange-axiom check.  Intended for basis families
    /// too large for the quadratic validation; the caller asserts
    /// matroidness.
    pub fn from_basis_masks_unchecked(
        ground_size: usize,
        mut masks: Vec<u32>,
    ) -> Result<Self, MatroidError> {
        if ground_size == 0 || ground_size > MAX_GROUND_SIZE {
            return Err(MatroidError::BadGroundSize(ground_size));
        }
        if masks.is_empty() {
            return Err(MatroidError::NoBases);
        }
        let full: u32 = ones(ground_size);
        masks.sort_unstable();
        masks.dedup();
        let rank = masks[0].count_ones() as usize;
        for &b in &masks {
            if b & !full != 0 {
                return Err(MatroidError::ElementOutOfRange {
                    element: (b & !full).trailing_zeros() as usize,
                    ground_size,
                });
            }
            if b.count_ones() as usize != rank {
                return Err(MatroidError::UnequalBasisSizes(rank, b.count_ones() as usize));
            }
        }
        Ok(Matroid {
            ground_size,
            rank,
            bases: masks,
            rank_table: OnceLock::new(),
        })
    }

    /// Exhaustive basis-exchange check: for every pair `(A, B)` and every
    /// `a in A \ B` there must be `b in B \ A` with `A - a + b` a basis.
    pub fn validate_exchange(&self) -> Result<(), MatroidError> {
        let set: HashSet<u32> = self.bases.iter().copied().collect();
        for &a in &self.bases {
            for &b in &self.bases {
                if a == b {
                    continue;
                }
                let mut only_a = a & !b;
                while only_a != 0 {
                    let e = only_a & only_a.wrapping_neg();
                    only_a ^= e;
                    let mut only_b = b & !a;
                    let mut found = false;
                    while only_b != 0 {
                        let f = only_b & only_b.wrapping_neg();
                        only_b ^= f;
                        if set.contains(&(a ^ e | f)) {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Err(MatroidError::ExchangeFailure(
                            elements_from_mask(a),
                            elements_from_mask(b),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Full ground set as a mask.
    pub fn full_mask(&self) -> u32 {
        ones(self.ground_size)
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn basis_sets(&self) -> Vec<Vec<usize>> {
        self.bases.iter().map(|&b| elements_from_mask(b)).collect()
    }

    pub fn is_basis(&self, mask: u32) -> bool {
        self.bases.binary_search(&mask).is_ok()
    }

    fn rank_table(&self) -> &[u8] {
        self.rank_table.get_or_init(|| {
            let size = 1usize << self.ground_size;
            let mut table = vec![0u8; size];
            for s in 1..size as u32 {
                let mut best = 0u32;
                for &b in &self.bases {
                    best = best.max((b & s).count_ones());
                    if best as usize == self.rank {
                        break;
                    }
                }
                table[s as usize] = best as u8;
            }
            table
        })
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, mask: u32) -> usize {
        debug_assert_eq!(mask & !self.full_mask(), 0);
        if self.ground_size <= RANK_TABLE_MAX {
            self.rank_table()[mask as usize] as usize
        } else {
            self.bases
                .iter()
                .map(|&b| (b & mask).count_ones() as usize)
                .max()
                .unwrap()
        }
    }

    pub fn is_independent(&self, mask: u32) -> bool {
        self.rank_of(mask) == mask.count_ones() as usize
    }

    pub fn closure(&self, mask: u32) -> u32 {
        let r = self.rank_of(mask);
        let mut out = mask;
        let mut rest = self.full_mask() & !mask;
        while rest != 0 {
            let e = rest & rest.wrapping_neg();
            rest ^= e;
            if self.rank_of(mask | e) == r {
                out |= e;
            }
        }
        out
    }

    pub fn is_flat(&self, mask: u32) -> bool {
        self.closure(mask) == mask
    }

    /// Minimal dependent sets, ascending by mask.
    pub fn circuits(&self) -> Vec<u32> {
        let full = self.full_mask();
        let mut out = Vec::new();
        for s in 1..=full {
            if self.is_independent(s) {
                continue;
            }
            let mut minimal = true;
            let mut rest = s;
            while rest != 0 {
                let e = rest & rest.wrapping_neg();
                rest ^= e;
                if !self.is_independent(s ^ e) {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push(s);
            }
        }
        out
    }

    /// Elements contained in no basis.
    pub fn loops(&self) -> u32 {
        self.full_mask() & !self.bases.iter().fold(0, |acc, &b| acc | b)
    }

    /// Elements contained in every basis.
    pub fn coloops(&self) -> u32 {
        self.bases.iter().fold(self.full_mask(), |acc, &b| acc & b)
    }

    /// Connected components: classes of the relation "lie on a common
    /// circuit"; loops and coloops are singletons.  Ordered by smallest
    /// element.
    pub fn connected_components(&self) -> Vec<u32> {
        let mut parent: Vec<usize> = (0..self.ground_size).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in self.circuits() {
            let first = c.trailing_zeros() as usize;
            let root = find(&mut parent, first);
            let mut rest = c;
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let r = find(&mut parent, e);
                parent[r] = root;
            }
        }
        let mut comps: Vec<u32> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; self.ground_size];
        for e in 0..self.ground_size {
            let r = find(&mut parent, e);
            match root_of[r] {
                Some(idx) => comps[idx] |= 1 << e,
                None => {
                    root_of[r] = Some(comps.len());
                    comps.push(1 << e);
                }
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Dual matroid: bases are the complements of bases.
    pub fn dual(&self) -> Matroid {
        let full = self.full_mask();
        let masks = self.bases.iter().map(|&b| full & !b).collect();
        Matroid::from_basis_masks_unchecked(self.ground_size, masks)
            .expect("dual of a matroid is a matroid")
    }

    /// Restriction to `mask`, relabeled order-preservingly onto
    /// `0..popcount(mask)`.  Returns the matroid together with the map from
    /// new labels to original elements.
    pub fn restriction(&self, mask: u32) -> (Matroid, Vec<usize>) {
        let elements = elements_from_mask(mask & self.full_mask());
        let r = self.rank_of(mask);
        let mut masks = Vec::new();
        if r == 0 {
            masks.push(0);
        } else {
            // Independent subsets of `mask` of size r, compressed onto the
            // new labels.
            let mut sub = mask;
            loop {
                if sub.count_ones() as usize == r && self.is_independent(sub) {
                    masks.push(compress(sub, &elements));
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        assert!(
            !elements.is_empty(),
            "restriction to the empty set is not representable"
        );
        let m = Matroid::from_basis_masks_unchecked(elements.len(), masks).unwrap();
        (m, elements)
    }

    /// Deletion of `mask` = restriction to its complement.
    pub fn deletion(&self, mask: u32) -> (Matroid, Vec<usize>) {
        self.restriction(self.full_mask() & !mask)
    }

    /// All cyclic flats (flats whose restriction has no coloops), tagged
    /// with their ranks, ordered by (size, mask).
    pub fn cyclic_flats(&self) -> Vec<CyclicFlat> {
        let full = self.full_mask();
        let mut out = Vec::new();
        for s in 0..=full {
            if !self.is_flat(s) {
                continue;
            }
            let r = self.rank_of(s);
            let mut coloop_free = true;
            let mut rest = s;
            while rest != 0 {
                let e = rest & rest.wrapping_neg();
                rest ^= e;
                if self.rank_of(s ^ e) != r {
                    coloop_free = false;
                    break;
                }
            }
            if coloop_free {
                out.push(CyclicFlat { elements: s, rank: r });
            }
        }
        out.sort_by_key(|f| (f.elements.count_ones(), f.elements));
        out
    }

    pub fn is_circuit(&self, mask: u32) -> bool {
        if self.is_independent(mask) {
            return false;
        }
        let mut rest = mask;
        while rest != 0 {
            let e = rest & rest.wrapping_neg();
            rest ^= e;
            if !self.is_independent(mask ^ e) {
                return false;
            }
        }
        true
    }

    /// Hyperplanes (flats of rank `rank-1`) that are simultaneously
    /// circuits, ascending by mask.
    pub fn circuit_hyperplanes(&self) -> Vec<u32> {
        if self.rank == 0 {
            return Vec::new();
        }
        self.circuits()
            .into_iter()
            .filter(|&c| self.rank_of(c) == self.rank - 1 && self.is_flat(c))
            .collect()
    }

    pub fn is_circuit_hyperplane(&self, mask: u32) -> bool {
        self.rank >= 1 && self.rank_of(mask) == self.rank - 1 && self.is_flat(mask) && self.is_circuit(mask)
    }

    /// Relaxation: turn the circuit-hyperplane `mask` into a basis.
    pub fn relax(&self, mask: u32) -> Result<Matroid, MatroidError> {
        if !self.is_circuit_hyperplane(mask) {
            return Err(MatroidError::NotCircuitHyperplane(elements_from_mask(mask)));
        }
        let mut masks = self.bases.clone();
        masks.push(mask);
        Matroid::from_basis_masks(self.ground_size, masks)
    }

    /// Every `rank`-subset of the ground set is a basis or a
    /// circuit-hyperplane.
    pub fn is_sparse_paving(&self) -> bool {
        let chs: HashSet<u32> = self.circuit_hyperplanes().into_iter().collect();
        let mut ok = true;
        for_each_subset_of_size(self.ground_size, self.rank, |s| {
            if !self.is_basis(s) && !chs.contains(&s) {
                ok = false;
            }
        });
        ok
    }

    /// Uniform matroid of the given rank: every `rank`-subset is a basis.
    pub fn uniform(rank: usize, ground_size: usize) -> Result<Matroid, MatroidError> {
        if ground_size == 0 || ground_size > MAX_GROUND_SIZE {
            return Err(MatroidError::BadGroundSize(ground_size));
        }
        if rank > ground_size {
            return Err(MatroidError::BadRank { rank, ground_size });
        }
        let mut masks = Vec::new();
        for_each_subset_of_size(ground_size, rank, |s| masks.push(s));
        Matroid::from_basis_masks_unchecked(ground_size, masks)
    }

    /// Graphic matroid on the edge list: bases are the maximal spanning
    /// forests.  Parallel edges and self-loops are allowed; the ground set
    /// is the edge index set.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Matroid, MatroidError> {
        if edges.is_empty() || edges.len() > MAX_GROUND_SIZE {
            return Err(MatroidError::BadGroundSize(edges.len()));
        }
        for &(a, b) in edges {
            if a >= vertices || b >= vertices {
                return Err(MatroidError::BadEdge(a, b, vertices));
            }
        }
        // Rank = vertices - components of the whole graph.
        let rank = vertices - graph_components(vertices, edges, ones(edges.len()));
        let mut masks = Vec::new();
        for_each_subset_of_size(edges.len(), rank, |s| {
            if is_forest(vertices, edges, s) {
                masks.push(s);
            }
        });
        Matroid::from_basis_masks_unchecked(edges.len(), masks)
    }

    /// Direct sum, with `other`'s elements shifted above `self`'s.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        let ground = self.ground_size + other.ground_size;
        if ground > MAX_GROUND_SIZE {
            return Err(MatroidError::BadGroundSize(ground));
        }
        let shift = self.ground_size;
        let mut masks = Vec::with_capacity(self.bases.len() * other.bases.len());
        for &a in &self.bases {
            for &b in &other.bases {
                masks.push(a | b << shift);
            }
        }
        Matroid::from_basis_masks_unchecked(ground, masks)
    }

    /// Sparse paving matroid on `{0..n}` of rank `d+1`: all `(d+1)`-subsets
    /// are bases except the listed circuit-hyperplanes, which must pairwise
    /// share at most `d-1` elements.
    pub fn sparse_paving(
        n: usize,
        d: usize,
        circuit_hyperplanes: &[Vec<usize>],
    ) -> Result<Matroid, MatroidError> {
        let ground = n + 1;
        if ground > MAX_GROUND_SIZE || n == 0 {
            return Err(MatroidError::BadGroundSize(ground));
        }
        if d >= ground {
            return Err(MatroidError::BadRank { rank: d + 1, ground_size: ground });
        }
        let mut ch_masks = Vec::with_capacity(circuit_hyperplanes.len());
        for h in circuit_hyperplanes {
            let mask = mask_from_elements(h, ground)?;
            if mask.count_ones() as usize != d + 1 || h.len() != d + 1 {
                return Err(MatroidError::BadHyperplaneSize(h.clone(), d + 1));
            }
            ch_masks.push(mask);
        }
        for i in 0..ch_masks.len() {
            for j in i + 1..ch_masks.len() {
                let shared = (ch_masks[i] & ch_masks[j]).count_ones() as usize;
                if ch_masks[i] == ch_masks[j] {
                    return Err(MatroidError::DuplicateHyperplane(elements_from_mask(ch_masks[i])));
                }
                if d == 0 || shared > d - 1 {
                    return Err(MatroidError::HyperplanesTooClose(
                        elements_from_mask(ch_masks[i]),
                        elements_from_mask(ch_masks[j]),
                        shared,
                    ));
                }
            }
        }
        let excluded: HashSet<u32> = ch_masks.iter().copied().collect();
        let mut masks = Vec::new();
        for_each_subset_of_size(ground, d + 1, |s| {
            if !excluded.contains(&s) {
                masks.push(s);
            }
        });
        if masks.is_empty() {
            return Err(MatroidError::NoBases);
        }
        Matroid::from_basis_masks_unchecked(ground, masks)
    }

    /// Schubert matroid of a binary sequence: reading `b` left to right,
    /// each 1 appends the next element as a coloop and each 0 appends it by
    /// free extension at the current rank.
    pub fn schubert(b: &BinarySequence) -> Result<Matroid, MatroidError> {
        let ground = b.n() + 1;
        if ground > MAX_GROUND_SIZE {
            return Err(MatroidError::BadGroundSize(ground));
        }
        let mut bases: HashSet<u32> = HashSet::from([0u32]);
        let mut rank = 0usize;
        for (i, &bit) in b.bits().iter().enumerate() {
            let e = 1u32 << i;
            if bit {
                bases = bases.iter().map(|&m| m | e).collect();
                rank += 1;
            } else {
                // Independent (rank-1)-sets are exactly the (rank-1)-subsets
                // of bases; each extends by the new element to a basis.
                let mut next = bases.clone();
                for &m in &bases {
                    let mut rest = m;
                    while rest != 0 {
                        let f = rest & rest.wrapping_neg();
                        rest ^= f;
                        next.insert(m ^ f | e);
                    }
                }
                bases = next;
            }
        }
        debug_assert_eq!(rank, b.d() + 1);
        Matroid::from_basis_masks_unchecked(ground, bases.into_iter().collect())
    }
}

/// Greedy maximal family of pairwise-compatible circuit-hyperplane
/// candidates for a sparse paving matroid on `{0..n}` of rank `d+1`,
/// scanning `(d+1)`-subsets in ascending mask order.  Every prefix of the
/// result is itself admissible.
pub fn greedy_hyperplane_family(n: usize, d: usize) -> Vec<u32> {
    let mut family: Vec<u32> = Vec::new();
    for_each_subset_of_size(n + 1, d + 1, |s| {
        if family
            .iter()
            .all(|&g| d >= 1 && ((g & s).count_ones() as usize) <= d - 1)
        {
            family.push(s);
        }
    });
    family
}

/// A flat whose restriction has no coloops, together with its rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicFlat {
    pub elements: u32,
    pub rank: usize,
}

impl CyclicFlat {
    pub fn element_set(&self) -> Vec<usize> {
        elements_from_mask(self.elements)
    }
}

fn ones(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Relabel the bits of `mask` (a subset of `elements`) onto positions
/// `0..elements.len()`.
fn compress(mask: u32, elements: &[usize]) -> u32 {
    let mut out = 0u32;
    for (new, &old) in elements.iter().enumerate() {
        if mask >> old & 1 == 1 {
            out |= 1 << new;
        }
    }
    out
}

/// Enumerate all `k`-subsets of `{0..m}` as masks, ascending.
fn for_each_subset_of_size(m: usize, k: usize, mut f: impl FnMut(u32)) {
    if k > m {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    // Gosper's hack.
    let limit = ones(m);
    let mut s = ones(k);
    while s <= limit {
        f(s);
        if s == 0 {
            break;
        }
        let c = s & s.wrapping_neg();
        let r = s + c;
        if r > limit || r < s {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
    }
}

fn graph_components(vertices: usize, edges: &[(usize, usize)], mask: u32) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = vertices;
    for (i, &(a, b)) in edges.iter().enumerate() {
        if mask >> i & 1 == 0 {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

fn is_forest(vertices: usize, edges: &[(usize, usize)], mask: u32) -> bool {
    let picked = mask.count_ones() as usize;
    vertices - graph_components(vertices, edges, mask) == picked
}
