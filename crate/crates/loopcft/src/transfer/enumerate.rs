//! Brute-force partition sums by direct enumeration of tile configurations.
//!
//! This is the independence oracle for the transfer matrix: it never
//! touches link patterns. Tiles are enumerated with raw occupation
//! variables; afterwards the global curve structure is rebuilt with a
//! union-find, loops are weighted by their boundary-touch counts via the
//! defining per-loop formula, and anchored paths by their endpoint pair.

use super::operator::{row_tiles, Tile};
use crate::scalar::LoopScalar;
use num_traits::Zero;

/// Boundary description for the oracle.
#[derive(Clone, Debug)]
pub enum OracleBoundary<T> {
    /// Isotropic: every bounce contributes a fixed factor.
    Isotropic { bounce: T },
    /// Anisotropic: bounces carry `base` (monomer factor) and blob/unblob
    /// fugacities resolved per closed loop.
    Anisotropic { base: T, w_blob: T, w_unblob: T },
    /// Open: lines may bounce or terminate.
    Open { bounce: T, end: T },
}

#[derive(Clone, Debug)]
pub struct OracleParams<T> {
    /// Diamond weights ω1..ω6 in the move-class order of
    /// [`crate::transfer::local::DiamondWeights`].
    pub diamond: [T; 6],
    pub left: OracleBoundary<T>,
    pub right: OracleBoundary<T>,
    pub n: T,
    pub n1: T,
    pub n2: T,
    pub n12: T,
    pub nu1: T,
    pub nu2: T,
    pub nu12: T,
}

#[derive(Clone, Copy)]
enum Conn {
    None,
    One(usize, usize),
    Two(usize, usize, usize, usize),
}

struct TileInstance {
    tile: Tile,
    /// slot ids: (a_in, b_in, a_out, b_out); triangles use the `a` pair
    slots: [usize; 4],
}

struct Config<T> {
    weight: T,
    /// input occupations required / outputs produced (a, b)
    occ_in: (bool, bool),
    occ_out: (bool, bool),
    conn: Conn,
    /// boundary touch on this tile's component (left side?)
    touch: Option<bool>,
    /// open end created at slot (endpoint id, left side?)
    ends: Vec<(usize, bool)>,
}

fn diamond_configs<T: LoopScalar>(w: &[T; 6], s: &[usize; 4]) -> Vec<Config<T>> {
    let mut v = Vec::new();
    let mut push = |weight: &T, occ_in, occ_out, conn| {
        if !weight.is_zero() {
            v.push(Config {
                weight: weight.clone(),
                occ_in,
                occ_out,
                conn,
                touch: None,
                ends: Vec::new(),
            });
        }
    };
    let (ai, bi, ao, bo) = (s[0], s[1], s[2], s[3]);
    push(&w[0], (false, false), (false, false), Conn::None);
    push(&w[2], (false, false), (true, true), Conn::One(ao, bo)); // cup
    push(&w[1], (true, false), (true, false), Conn::One(ai, ao)); // pass left
    push(&w[1], (false, true), (false, true), Conn::One(bi, bo)); // pass right
    push(&w[3], (true, false), (false, true), Conn::One(ai, bo)); // cross
    push(&w[3], (false, true), (true, false), Conn::One(bi, ao)); // cross
    push(&w[2], (true, true), (false, false), Conn::One(ai, bi)); // cap
    push(&w[4], (true, true), (true, true), Conn::Two(ai, ao, bi, bo)); // double
    push(&w[5], (true, true), (true, true), Conn::Two(ai, bi, ao, bo)); // cap+cup
    v
}

fn triangle_configs<T: LoopScalar>(
    b: &OracleBoundary<T>,
    s: &[usize; 4],
    left: bool,
) -> Vec<Config<T>> {
    let (e_in, e_out) = (s[0], s[2]);
    let mut v = vec![Config {
        weight: T::one(),
        occ_in: (false, false),
        occ_out: (false, false),
        conn: Conn::None,
        touch: None,
        ends: Vec::new(),
    }];
    match b {
        OracleBoundary::Isotropic { bounce } => {
            if !bounce.is_zero() {
                v.push(Config {
                    weight: bounce.clone(),
                    occ_in: (true, false),
                    occ_out: (true, false),
                    conn: Conn::One(e_in, e_out),
                    touch: None,
                    ends: Vec::new(),
                });
            }
        }
        OracleBoundary::Anisotropic { base, .. } => {
            if !base.is_zero() {
                v.push(Config {
                    weight: base.clone(),
                    occ_in: (true, false),
                    occ_out: (true, false),
                    conn: Conn::One(e_in, e_out),
                    touch: Some(left),
                    ends: Vec::new(),
                });
            }
        }
        OracleBoundary::Open { bounce, end } => {
            if !bounce.is_zero() {
                v.push(Config {
                    weight: bounce.clone(),
                    occ_in: (true, false),
                    occ_out: (true, false),
                    conn: Conn::One(e_in, e_out),
                    touch: None,
                    ends: Vec::new(),
                });
            }
            if !end.is_zero() {
                // terminate the incoming line
                v.push(Config {
                    weight: end.clone(),
                    occ_in: (true, false),
                    occ_out: (false, false),
                    conn: Conn::None,
                    touch: None,
                    ends: vec![(e_in, left)],
                });
                // emit a new line
                v.push(Config {
                    weight: end.clone(),
                    occ_in: (false, false),
                    occ_out: (true, false),
                    conn: Conn::None,
                    touch: None,
                    ends: vec![(e_out, left)],
                });
            }
        }
    }
    v
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn powi<T: LoopScalar>(base: &T, k: usize) -> T {
    let mut acc = T::one();
    for _ in 0..k {
        acc = acc * base.clone();
    }
    acc
}

/// Weight of a closed loop with `k` left and `m` right anisotropic
/// touches, from the blob-projector expansion of the defining measure.
fn loop_factor<T: LoopScalar>(p: &OracleParams<T>, k: usize, m: usize) -> T {
    let (wb, wu) = match &p.left {
        OracleBoundary::Anisotropic { w_blob, w_unblob, .. } => (w_blob.clone(), w_unblob.clone()),
        _ => (T::one(), T::one()),
    };
    let (wbw, wuw) = match &p.right {
        OracleBoundary::Anisotropic { w_blob, w_unblob, .. } => (w_blob.clone(), w_unblob.clone()),
        _ => (T::one(), T::one()),
    };
    match (k > 0, m > 0) {
        (false, false) => p.n.clone(),
        (true, false) => {
            p.n1.clone() * powi(&wb, k) + (p.n.clone() - p.n1.clone()) * powi(&wu, k)
        }
        (false, true) => {
            p.n2.clone() * powi(&wbw, m) + (p.n.clone() - p.n2.clone()) * powi(&wuw, m)
        }
        (true, true) => {
            p.n12.clone() * powi(&wb, k) * powi(&wbw, m)
                + (p.n1.clone() - p.n12.clone()) * powi(&wb, k) * powi(&wuw, m)
                + (p.n2.clone() - p.n12.clone()) * powi(&wu, k) * powi(&wbw, m)
                + (p.n.clone() - p.n1.clone() - p.n2.clone() + p.n12.clone())
                    * powi(&wu, k)
                    * powi(&wuw, m)
        }
    }
}

/// Exact partition sum of a `width × rows` patch with empty top/bottom
/// cuts, by exhaustive enumeration.
pub fn partition_sum_enumerated<T: LoopScalar>(
    width: usize,
    rows: usize,
    params: &OracleParams<T>,
) -> T {
    // lay out tile instances and slot ids
    let mut slot_count = width;
    let mut cur: Vec<usize> = (0..width).collect();
    let mut instances: Vec<TileInstance> = Vec::new();
    for _ in 0..rows {
        for tile in row_tiles(width) {
            let (a, b) = match tile {
                Tile::Diamond(i) => (i, Some(i + 1)),
                Tile::LeftTriangle => (0, None),
                Tile::RightTriangle => (width - 1, None),
            };
            let a_in = cur[a];
            let a_out = slot_count;
            slot_count += 1;
            cur[a] = a_out;
            let (b_in, b_out) = if let Some(b) = b {
                let bi = cur[b];
                let bo = slot_count;
                slot_count += 1;
                cur[b] = bo;
                (bi, bo)
            } else {
                (usize::MAX, usize::MAX)
            };
            instances.push(TileInstance {
                tile,
                slots: [a_in, b_in, a_out, b_out],
            });
        }
    }
    let final_slots = cur;

    // per-tile configuration lists
    let configs: Vec<Vec<Config<T>>> = instances
        .iter()
        .map(|inst| match inst.tile {
            Tile::Diamond(_) => diamond_configs(&params.diamond, &inst.slots),
            Tile::LeftTriangle => triangle_configs(&params.left, &inst.slots, true),
            Tile::RightTriangle => triangle_configs(&params.right, &inst.slots, false),
        })
        .collect();

    let mut occ = vec![false; slot_count];
    let mut choice = vec![0usize; instances.len()];
    let mut total = T::zero();
    let mut depth = 0usize;

    // iterative DFS over tile choices
    'outer: loop {
        if depth == instances.len() {
            if final_slots.iter().all(|&s| !occ[s]) {
                total += evaluate_leaf(params, &instances, &configs, &choice, slot_count, &occ);
            }
        } else {
            let inst = &instances[depth];
            let cfgs = &configs[depth];
            let want = (
                occ[inst.slots[0]],
                if inst.slots[1] == usize::MAX {
                    false
                } else {
                    occ[inst.slots[1]]
                },
            );
            let start = choice[depth];
            let mut found = None;
            for (k, c) in cfgs.iter().enumerate().skip(start) {
                if c.occ_in == want {
                    found = Some(k);
                    break;
                }
            }
            if let Some(k) = found {
                choice[depth] = k;
                let c = &cfgs[k];
                occ[inst.slots[2]] = c.occ_out.0;
                if inst.slots[3] != usize::MAX {
                    occ[inst.slots[3]] = c.occ_out.1;
                }
                depth += 1;
                if depth < instances.len() {
                    choice[depth] = 0;
                }
                continue 'outer;
            }
        }
        // backtrack
        loop {
            if depth == 0 {
                return total;
            }
            depth -= 1;
            choice[depth] += 1;
            let inst = &instances[depth];
            let cfgs = &configs[depth];
            let want = (
                occ[inst.slots[0]],
                if inst.slots[1] == usize::MAX {
                    false
                } else {
                    occ[inst.slots[1]]
                },
            );
            if cfgs
                .iter()
                .skip(choice[depth])
                .any(|c| c.occ_in == want)
            {
                break;
            }
        }
        if depth < instances.len() {
            // re-enter the outer loop to pick the found config
            continue 'outer;
        }
    }
}

fn evaluate_leaf<T: LoopScalar>(
    params: &OracleParams<T>,
    instances: &[TileInstance],
    configs: &[Vec<Config<T>>],
    choice: &[usize],
    slot_count: usize,
    _occ: &[bool],
) -> T {
    let mut weight = T::one();
    let mut dsu = Dsu::new(slot_count);
    let mut touches_l = vec![0usize; slot_count];
    let mut touches_r = vec![0usize; slot_count];
    let mut endpoints: Vec<(usize, bool)> = Vec::new();
    let mut degree = vec![0usize; slot_count];
    for (idx, _inst) in instances.iter().enumerate() {
        let c = &configs[idx][choice[idx]];
        weight = weight * c.weight.clone();
        match c.conn {
            Conn::None => {}
            Conn::One(a, b) => {
                dsu.union(a, b);
                degree[a] += 1;
                degree[b] += 1;
            }
            Conn::Two(a, b, cc, d) => {
                dsu.union(a, b);
                dsu.union(cc, d);
                degree[a] += 1;
                degree[b] += 1;
                degree[cc] += 1;
                degree[d] += 1;
            }
        }
        if let Some(left) = c.touch {
            let root = c.conn_first().expect("touch on empty tile");
            if left {
                touches_l[root] += 1;
            } else {
                touches_r[root] += 1;
            }
        }
        for &(slot, left) in &c.ends {
            endpoints.push((slot, left));
        }
    }
    // accumulate per-component touch counts and endpoint labels
    let mut comp_tl = std::collections::HashMap::new();
    let mut comp_tr = std::collections::HashMap::new();
    for s in 0..slot_count {
        if touches_l[s] > 0 {
            *comp_tl.entry(dsu.find(s)).or_insert(0usize) += touches_l[s];
        }
        if touches_r[s] > 0 {
            *comp_tr.entry(dsu.find(s)).or_insert(0usize) += touches_r[s];
        }
    }
    let mut comp_ends: std::collections::HashMap<usize, Vec<bool>> =
        std::collections::HashMap::new();
    for &(slot, left) in &endpoints {
        comp_ends.entry(dsu.find(slot)).or_default().push(left);
    }
    // classify components: a component with endpoints is an anchored path,
    // otherwise a closed loop (only components with any connection count)
    let mut seen = std::collections::HashSet::new();
    for s in 0..slot_count {
        if degree[s] == 0 {
            continue;
        }
        let root = dsu.find(s);
        if !seen.insert(root) {
            continue;
        }
        let ends = comp_ends.get(&root).map(|v| v.as_slice()).unwrap_or(&[]);
        match ends.len() {
            0 => {
                let k = comp_tl.get(&root).copied().unwrap_or(0);
                let m = comp_tr.get(&root).copied().unwrap_or(0);
                weight = weight * loop_factor(params, k, m);
            }
            2 => {
                debug_assert!(comp_tl.get(&root).is_none() && comp_tr.get(&root).is_none());
                let w = match (ends[0], ends[1]) {
                    (true, true) => params.nu1.clone(),
                    (false, false) => params.nu2.clone(),
                    _ => params.nu12.clone(),
                };
                weight = weight * w;
            }
            _ => panic!("curve with {} endpoints", ends.len()),
        }
    }
    weight
}

impl<T> Config<T> {
    fn conn_first(&self) -> Option<usize> {
        match self.conn {
            Conn::None => None,
            Conn::One(a, _) => Some(a),
            Conn::Two(a, _, _, _) => Some(a),
        }
    }
}
