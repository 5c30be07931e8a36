//! Rectangle diagrams of the (dilute) Temperley-Lieb and blob algebras,
//! their composition, Markov traces and sector traces.

use super::pattern::{BasisSpec, BoundaryMode, LinkPattern, Mark, Site};
use super::poly::{dim_polynomial, DimFlavor, LoopWeights, WeightPolynomial};
use super::AlgebraError;
use crate::Rat;

use rand::Rng;

/// A planar diagram in a rectangle with `n_bot` bottom and `n_top` top
/// points, carrying blob decorations and an accumulated loop weight.
///
/// Points use a combined index: bottom `0..n_bot` left to right, then top
/// `n_bot..n_bot+n_top` left to right. Decorations are stored at the
/// smaller combined index of each connected pair.
#[derive(Clone, PartialEq, Debug)]
pub struct Diagram {
    n_bot: usize,
    n_top: usize,
    conn: Vec<Option<u16>>,
    lmark: Vec<Mark>,
    rmark: Vec<Mark>,
    weight: WeightPolynomial,
}

impl Diagram {
    pub fn n_bot(&self) -> usize {
        self.n_bot
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn weight(&self) -> &WeightPolynomial {
        &self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.weight.is_zero()
    }

    fn blank(n_bot: usize, n_top: usize) -> Self {
        let n = n_bot + n_top;
        Diagram {
            n_bot,
            n_top,
            conn: vec![None; n],
            lmark: vec![Mark::None; n],
            rmark: vec![Mark::None; n],
            weight: WeightPolynomial::one(),
        }
    }

    fn connect(&mut self, a: usize, b: usize) {
        self.conn[a] = Some(b as u16);
        self.conn[b] = Some(a as u16);
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::blank(n, n);
        for i in 0..n {
            d.connect(i, n + i);
        }
        d
    }

    /// Temperley-Lieb generator `e_i` (0-based): caps strands `i, i+1` and
    /// reopens them.
    pub fn tl_e(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut d = Self::identity(n);
        d.connect(i, i + 1);
        d.connect(n + i, n + i + 1);
        d
    }

    /// Blob generator: marks the leftmost strand.
    pub fn blob_left(n: usize) -> Self {
        let mut d = Self::identity(n);
        d.lmark[0] = Mark::Blob;
        d
    }

    /// Orthogonal projector `1 - b` as a decorated diagram.
    pub fn unblob_left(n: usize) -> Self {
        let mut d = Self::identity(n);
        d.lmark[0] = Mark::Unblob;
        d
    }

    /// White blob generator: marks the rightmost strand.
    pub fn blob_right(n: usize) -> Self {
        let mut d = Self::identity(n);
        d.rmark[n - 1] = Mark::Blob;
        d
    }

    pub fn unblob_right(n: usize) -> Self {
        let mut d = Self::identity(n);
        d.rmark[n - 1] = Mark::Unblob;
        d
    }

    pub fn scale(mut self, c: &Rat) -> Self {
        self.weight = self.weight.scale(c);
        self
    }

    /// Fully packed TL diagram from a non-crossing pairing of the boundary
    /// cycle (bottom left→right, then top right→left).
    pub fn from_cycle_pairing(n_bot: usize, n_top: usize, pairs: &[(usize, usize)]) -> Self {
        let mut d = Self::blank(n_bot, n_top);
        let total = n_bot + n_top;
        let to_combined = |cyc: usize| -> usize {
            if cyc < n_bot {
                cyc
            } else {
                n_bot + (total - 1 - cyc)
            }
        };
        for &(a, b) in pairs {
            d.connect(to_combined(a), to_combined(b));
        }
        d
    }

    fn cycle_pos(&self, combined: usize) -> usize {
        if combined < self.n_bot {
            combined
        } else {
            let j = combined - self.n_bot;
            self.n_bot + (self.n_top - 1 - j)
        }
    }

    /// Is the connection through `p` exposed to the left (resp. right)
    /// wall, i.e. separated from it by no other connection?
    pub fn exposed(&self, p: usize, left: bool) -> bool {
        let total = self.n_bot + self.n_top;
        let q = match self.conn[p] {
            Some(q) => q as usize,
            None => return false,
        };
        // linearize the boundary cycle cutting at the requested wall;
        // the left wall sits before cycle position 0, the right wall
        // before cycle position n_bot.
        let cut = if left { 0 } else { self.n_bot };
        let lin = |x: usize| (self.cycle_pos(x) + total - cut) % total;
        let (a, b) = {
            let (pa, pb) = (lin(p), lin(q));
            (pa.min(pb), pa.max(pb))
        };
        for r in 0..total {
            if r == p || r == q {
                continue;
            }
            if let Some(s) = self.conn[r] {
                let s = s as usize;
                if s < r {
                    continue;
                }
                let (c, d) = {
                    let (pc, pd) = (lin(r), lin(s));
                    (pc.min(pd), pc.max(pd))
                };
                if c < a && b < d {
                    return false;
                }
            }
        }
        true
    }

    /// Structural checks: planarity and decoration placement.
    pub fn validate(&self) -> Result<(), String> {
        let total = self.n_bot + self.n_top;
        for p in 0..total {
            if let Some(q) = self.conn[p] {
                let q = q as usize;
                if q >= total || self.conn[q] != Some(p as u16) || q == p {
                    return Err(format!("bad connection at {p}"));
                }
            }
        }
        // planarity in the boundary cycle
        for p in 0..total {
            let q = match self.conn[p] {
                Some(q) => q as usize,
                None => continue,
            };
            if q < p {
                continue;
            }
            let (a, b) = (self.cycle_pos(p).min(self.cycle_pos(q)), self.cycle_pos(p).max(self.cycle_pos(q)));
            for r in p + 1..total {
                let s = match self.conn[r] {
                    Some(s) => s as usize,
                    None => continue,
                };
                if s < r || r == q {
                    continue;
                }
                let (c, d) = (self.cycle_pos(r).min(self.cycle_pos(s)), self.cycle_pos(r).max(self.cycle_pos(s)));
                let inside_c = a < c && c < b;
                let inside_d = a < d && d < b;
                if inside_c != inside_d {
                    return Err(format!("crossing connections {p}-{q} and {r}-{s}"));
                }
            }
        }
        for p in 0..total {
            let keyed = self.conn[p].map(|q| (q as usize) > p).unwrap_or(false);
            if !keyed && (self.lmark[p] != Mark::None || self.rmark[p] != Mark::None) {
                return Err(format!("decoration off key point at {p}"));
            }
            if keyed && self.lmark[p] != Mark::None && !self.exposed(p, true) {
                return Err(format!("left decoration on covered connection at {p}"));
            }
            if keyed && self.rmark[p] != Mark::None && !self.exposed(p, false) {
                return Err(format!("right decoration on covered connection at {p}"));
            }
        }
        Ok(())
    }

    fn pair_marks(&self, p: usize) -> (Mark, Mark) {
        let q = self.conn[p].expect("marks of unoccupied point") as usize;
        let k = p.min(q);
        (self.lmark[k], self.rmark[k])
    }

    /// Stack `top` above `self`, gluing `self`'s top to `top`'s bottom.
    ///
    /// Closed loops contribute weight factors keyed by their merged marks;
    /// a blob meeting the opposite projector annihilates the product
    /// (zero diagram).
    pub fn compose(&self, top: &Diagram) -> Result<Diagram, AlgebraError> {
        if self.is_zero() || top.is_zero() {
            return Ok(Self::zero_like(self.n_bot, top.n_top));
        }
        if self.n_top != top.n_bot {
            return Err(AlgebraError::InterfaceMismatch);
        }
        let mid = self.n_top;
        for j in 0..mid {
            if self.conn[self.n_bot + j].is_some() != top.conn[j].is_some() {
                return Err(AlgebraError::InterfaceMismatch);
            }
        }
        let mut out = Self::blank(self.n_bot, top.n_top);
        out.weight = &self.weight * &top.weight;
        if out.weight.is_zero() {
            return Ok(out);
        }

        // walk alternating between the two diagrams through the glue line
        let enc_bot = |p: usize| p; // self point
        let enc_top = |p: usize| self.n_bot + self.n_top + p; // top point
        let mut visited = vec![false; self.conn.len() + top.conn.len()];
        let final_of = |enc: usize| -> Option<usize> {
            // map an encoded point to the output combined index, if final
            if enc < self.n_bot {
                Some(enc)
            } else if enc >= self.n_bot + self.n_top + top.n_bot {
                Some(self.n_bot + (enc - self.n_bot - self.n_top - top.n_bot))
            } else {
                None
            }
        };
        let walk = |start: usize, visited: &mut Vec<bool>| -> Option<(usize, Mark, Mark)> {
            // follows the path starting at encoded final point `start`;
            // returns (other endpoint, merged marks); None for mark kill.
            let mut lm = Mark::None;
            let mut rm = Mark::None;
            let mut cur = start;
            loop {
                visited[cur] = true;
                let (next, pl, pr) = if cur < self.n_bot + self.n_top {
                    let q = self.conn[cur].unwrap() as usize;
                    let (pl, pr) = self.pair_marks(cur);
                    (enc_bot(q), pl, pr)
                } else {
                    let p = cur - self.n_bot - self.n_top;
                    let q = top.conn[p].unwrap() as usize;
                    let (pl, pr) = top.pair_marks(p);
                    (enc_top(q), pl, pr)
                };
                lm = lm.merge(pl)?;
                rm = rm.merge(pr)?;
                visited[next] = true;
                if let Some(f) = final_of(next) {
                    return Some((f, lm, rm));
                }
                // hop through the glue line
                cur = if next < self.n_bot + self.n_top {
                    enc_top(next - self.n_bot)
                } else {
                    enc_bot(self.n_bot + (next - self.n_bot - self.n_top))
                };
            }
        };

        // open paths anchored at final points
        let finals: Vec<usize> = (0..self.n_bot)
            .map(enc_bot)
            .chain((top.n_bot..top.n_bot + top.n_top).map(enc_top))
            .collect();
        for &f in &finals {
            let occupied = if f < self.n_bot {
                self.conn[f].is_some()
            } else {
                top.conn[f - self.n_bot - self.n_top].is_some()
            };
            if !occupied || visited[f] {
                continue;
            }
            match walk(f, &mut visited) {
                None => return Ok(Self::zero_like(self.n_bot, top.n_top)),
                Some((other, lm, rm)) => {
                    let a = final_of(f).unwrap();
                    let k = a.min(other);
                    out.connect(a, other);
                    out.lmark[k] = lm;
                    out.rmark[k] = rm;
                }
            }
        }
        // remaining cycles are closed loops
        for j in 0..mid {
            let enc = enc_bot(self.n_bot + j);
            if self.conn[self.n_bot + j].is_none() || visited[enc] {
                continue;
            }
            let mut lm = Mark::None;
            let mut rm = Mark::None;
            let mut cur = enc;
            loop {
                visited[cur] = true;
                let (next, pl, pr) = if cur < self.n_bot + self.n_top {
                    let q = self.conn[cur].unwrap() as usize;
                    let (pl, pr) = self.pair_marks(cur);
                    (enc_bot(q), pl, pr)
                } else {
                    let p = cur - self.n_bot - self.n_top;
                    let q = top.conn[p].unwrap() as usize;
                    let (pl, pr) = top.pair_marks(p);
                    (enc_top(q), pl, pr)
                };
                let (l2, r2) = match (lm.merge(pl), rm.merge(pr)) {
                    (Some(l), Some(r)) => (l, r),
                    _ => return Ok(Self::zero_like(self.n_bot, top.n_top)),
                };
                lm = l2;
                rm = r2;
                visited[next] = true;
                let hop = if next < self.n_bot + self.n_top {
                    enc_top(next - self.n_bot)
                } else {
                    enc_bot(self.n_bot + (next - self.n_bot - self.n_top))
                };
                if hop == enc {
                    break;
                }
                cur = hop;
            }
            out.weight = &out.weight * &WeightPolynomial::loop_class(lm, rm);
        }
        debug_assert!(out.validate().is_ok(), "compose produced invalid diagram");
        Ok(out)
    }

    fn zero_like(n_bot: usize, n_top: usize) -> Diagram {
        let mut d = Self::blank(n_bot, n_top);
        d.weight = WeightPolynomial::zero();
        d
    }

    /// Markov trace: identify top and bottom around the annulus and weight
    /// every closed loop by its mark class.
    pub fn markov_trace(&self) -> Result<WeightPolynomial, AlgebraError> {
        if self.n_bot != self.n_top {
            return Err(AlgebraError::InterfaceMismatch);
        }
        let n = self.n_bot;
        for i in 0..n {
            if self.conn[i].is_some() != self.conn[n + i].is_some() {
                // occupation patterns differ: closure impossible
                return Ok(WeightPolynomial::zero());
            }
        }
        let mut out = self.weight.clone();
        let mut visited = vec![false; 2 * n];
        for start in 0..2 * n {
            if visited[start] || self.conn[start].is_none() {
                continue;
            }
            let mut lm = Mark::None;
            let mut rm = Mark::None;
            let mut cur = start;
            loop {
                visited[cur] = true;
                let q = self.conn[cur].unwrap() as usize;
                let (pl, pr) = self.pair_marks(cur);
                lm = match lm.merge(pl) {
                    Some(m) => m,
                    None => return Ok(WeightPolynomial::zero()),
                };
                rm = match rm.merge(pr) {
                    Some(m) => m,
                    None => return Ok(WeightPolynomial::zero()),
                };
                visited[q] = true;
                // glue top i <-> bottom i
                let glued = if q < n { q + n } else { q - n };
                if glued == start {
                    break;
                }
                cur = glued;
            }
            out = &out * &WeightPolynomial::loop_class(lm, rm);
        }
        Ok(out)
    }

    /// View a link pattern as a `(strings -> sites)` diagram so that the
    /// algebra action is plain composition.
    pub fn from_pattern(p: &LinkPattern) -> Diagram {
        let n = p.len();
        let strings: Vec<usize> = (0..n).filter(|&i| p.site(i) == Site::String).collect();
        let l = strings.len();
        let mut d = Self::blank(l, n);
        for (k, &s) in strings.iter().enumerate() {
            d.connect(k, l + s);
            d.lmark[k] = p.lmark(s);
            d.rmark[k] = p.rmark(s);
        }
        for i in 0..n {
            if p.site(i) == Site::Arc {
                let j = p.partner(i).unwrap();
                if j > i {
                    d.connect(l + i, l + j);
                    d.lmark[l + i] = p.lmark(i);
                    d.rmark[l + i] = p.rmark(i);
                }
            }
        }
        d
    }

    /// Inverse of [`Diagram::from_pattern`] for diagrams with no
    /// bottom-bottom connections.
    pub fn to_pattern(&self) -> Option<(LinkPattern, WeightPolynomial)> {
        let l = self.n_bot;
        let n = self.n_top;
        let mut p = LinkPattern::empty(n);
        for k in 0..l {
            let q = self.conn[k]? as usize;
            if q < l {
                return None; // two strings contracted
            }
            let site = q - l;
            p.set_site(site, Site::String);
        }
        for i in 0..n {
            if let Some(q) = self.conn[l + i] {
                let q = q as usize;
                if q >= l && q > l + i {
                    p.set_arc(i, q - l);
                }
            }
        }
        for i in 0..n {
            if p.site(i) != Site::Empty && p.key_site(i) == i {
                let combined = match p.site(i) {
                    Site::String => {
                        let k = (0..l).find(|&k| self.conn[k] == Some((l + i) as u16))?;
                        k
                    }
                    _ => l + i,
                };
                let kk = combined.min(self.conn[combined].unwrap() as usize);
                p.set_marks(i, self.lmark[kk], self.rmark[kk]);
            }
        }
        Some((p, self.weight.clone()))
    }

    /// Action on a module element, resolved in the decorated basis whose
    /// arc marks are `None`/`Blob`.
    ///
    /// String contraction and projector kills give an empty result; an
    /// unblob mark acquired by an arc is expanded as `1 - blob`, so the
    /// image is in general a combination of decorated patterns.
    pub fn act(&self, p: &LinkPattern) -> Vec<(LinkPattern, WeightPolynomial)> {
        let pd = Self::from_pattern(p);
        let r = match pd.compose(self) {
            Ok(r) => r,
            Err(_) => return Vec::new(),
        };
        if r.is_zero() {
            return Vec::new();
        }
        let Some((q, w)) = r.to_pattern() else {
            return Vec::new();
        };
        let mut out = vec![(q, w)];
        let mut resolved = Vec::new();
        while let Some((q, w)) = out.pop() {
            let unblob_arc = (0..q.len()).find(|&i| {
                q.site(i) == Site::Arc
                    && q.key_site(i) == i
                    && (q.lmark(i) == Mark::Unblob || q.rmark(i) == Mark::Unblob)
            });
            match unblob_arc {
                None => resolved.push((q, w)),
                Some(i) => {
                    let (lm, rm) = q.marks(i);
                    let (plain, flip, left) = if lm == Mark::Unblob {
                        (Mark::None, Mark::Blob, true)
                    } else {
                        (Mark::None, Mark::Blob, false)
                    };
                    for (m, sign) in [(plain, 1i64), (flip, -1)] {
                        let mut q2 = q.clone();
                        if left {
                            q2.set_marks(i, m, rm);
                        } else {
                            q2.set_marks(i, lm, m);
                        }
                        out.push((q2, w.scale(&crate::rat(sign, 1))));
                    }
                }
            }
        }
        resolved
    }
}

/// Ordinary matrix trace of a diagram acting on a string sector.
///
/// `sector` fixes the projector carried by the leftmost (and, in
/// two-boundary mode, rightmost) string; diagrams contracting two strings
/// act as zero.
pub fn sector_trace(
    d: &Diagram,
    strings: usize,
    mode: BoundaryMode,
    sector: (Mark, Mark),
    dilute: bool,
) -> Result<WeightPolynomial, AlgebraError> {
    if d.n_bot() != d.n_top() {
        return Err(AlgebraError::InterfaceMismatch);
    }
    let basis = sector_basis(d.n_bot(), strings, mode, sector, dilute)?;
    let mut tr = WeightPolynomial::zero();
    for p in &basis {
        for (q, w) in d.act(p) {
            if q == *p {
                tr = tr + w;
            }
        }
    }
    Ok(tr)
}

/// Sector basis: enumerated patterns with the sector marks stamped on the
/// leftmost/rightmost strings.
pub fn sector_basis(
    n: usize,
    strings: usize,
    mode: BoundaryMode,
    sector: (Mark, Mark),
    dilute: bool,
) -> Result<Vec<LinkPattern>, AlgebraError> {
    let base = super::pattern::enumerate_basis(
        n,
        &BasisSpec {
            strings,
            mode,
            dilute,
        },
    )
    .map_err(AlgebraError::BadBasis)?;
    let mut out = Vec::with_capacity(base.len());
    for mut p in base {
        if mode != BoundaryMode::Blobless && strings > 0 {
            if let Some(s) = p.leftmost_string() {
                let (_, rm) = p.marks(s);
                p.set_marks(s, sector.0, rm);
            }
            if mode == BoundaryMode::TwoBoundary {
                if let Some(s) = p.rightmost_string() {
                    let (lm, _) = p.marks(s);
                    p.set_marks(s, lm, sector.1);
                }
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Random word in the algebra generators, for randomized identity checks.
pub fn random_word<R: Rng>(n: usize, len: usize, mode: BoundaryMode, rng: &mut R) -> Diagram {
    let mut d = Diagram::identity(n);
    for _ in 0..len {
        let n_gen = match mode {
            BoundaryMode::Blobless => n - 1,
            BoundaryMode::OneBoundary => n + 1,
            BoundaryMode::TwoBoundary => n + 3,
        };
        let k = rng.gen_range(0..n_gen);
        let g = if k < n - 1 {
            Diagram::tl_e(n, k)
        } else {
            match k - (n - 1) {
                0 => Diagram::blob_left(n),
                1 => Diagram::unblob_left(n),
                2 => Diagram::blob_right(n),
                _ => Diagram::unblob_right(n),
            }
        };
        d = d.compose(&g).expect("generator composition");
        if d.is_zero() {
            return d;
        }
    }
    d
}

/// All fully packed TL_N diagrams (Catalan(N) of them), undecorated.
pub fn all_tl_diagrams(n: usize) -> Vec<Diagram> {
    let pairings = super::pattern::enumerate_basis(
        2 * n,
        &BasisSpec {
            strings: 0,
            mode: BoundaryMode::Blobless,
            dilute: false,
        },
    )
    .expect("cycle pairing enumeration");
    pairings
        .iter()
        .map(|p| {
            let pairs: Vec<(usize, usize)> = (0..2 * n)
                .filter_map(|i| p.partner(i).map(|j| (i, j)))
                .filter(|&(i, j)| i < j)
                .collect();
            Diagram::from_cycle_pairing(n, n, &pairs)
        })
        .collect()
}

/// Outcome of a randomized Markov-identity check.
#[derive(Clone, Debug)]
pub struct MarkovReport {
    pub mode: BoundaryMode,
    pub trials: usize,
    pub max_residual: f64,
    /// Numerically solved trace coefficients for the two-boundary mode,
    /// labelled by (strings, left mark, right mark).
    pub solved_coefficients: Option<Vec<((usize, Mark, Mark), f64)>>,
}

fn sector_list(n: usize, mode: BoundaryMode) -> Vec<(usize, Mark, Mark)> {
    let mut out = Vec::new();
    let lmin = n % 2;
    let mut l = lmin;
    while l <= n {
        if l == 0 {
            out.push((0, Mark::None, Mark::None));
        } else {
            match mode {
                BoundaryMode::Blobless => out.push((l, Mark::None, Mark::None)),
                BoundaryMode::OneBoundary => {
                    out.push((l, Mark::Blob, Mark::None));
                    out.push((l, Mark::Unblob, Mark::None));
                }
                BoundaryMode::TwoBoundary => {
                    for sl in [Mark::Blob, Mark::Unblob] {
                        for sr in [Mark::Blob, Mark::Unblob] {
                            out.push((l, sl, sr));
                        }
                    }
                }
            }
        }
        l += 2;
    }
    out
}

/// Known closed-form trace coefficient for the blobless and one-boundary
/// Markov decompositions.
fn known_coefficient(l: usize, sl: Mark) -> WeightPolynomial {
    if l == 0 {
        return WeightPolynomial::one();
    }
    match sl {
        Mark::None => dim_polynomial(l, DimFlavor::Plain),
        Mark::Blob => dim_polynomial(l, DimFlavor::Blob),
        Mark::Unblob => dim_polynomial(l, DimFlavor::Unblob),
    }
}

/// Randomized verification of the Markov-trace decomposition
/// `Tr A = Σ coef_σ tr_σ A`.
///
/// Blobless and one-boundary modes use the closed-form Chebyshev
/// coefficients; the two-boundary mode solves for the coefficients by
/// least squares on half the sample and reports the residual on the rest.
pub fn markov_identity_check(
    n: usize,
    trials: usize,
    seed: u64,
    mode: BoundaryMode,
) -> Result<MarkovReport, AlgebraError> {
    use rand::SeedableRng;
    if n > 10 {
        return Err(AlgebraError::TooLarge { n, limit: 10 });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let sectors = sector_list(n, mode);
    let weights = LoopWeights {
        n: 1.0 + 0.8 * rng.gen::<f64>(),
        n1: 0.3 + 0.6 * rng.gen::<f64>(),
        n2: 0.3 + 0.6 * rng.gen::<f64>(),
        n12: 0.2 + 0.5 * rng.gen::<f64>(),
    };

    // stratified sample: short words keep the high-string sectors alive
    let mut words = vec![Diagram::identity(n)];
    while words.len() < trials {
        let len = 1 + words.len() % (2 * n);
        let w = random_word(n, len, mode, &mut rng);
        if !w.is_zero() {
            words.push(w);
        }
    }

    let mut rows = Vec::with_capacity(words.len());
    let mut lhs = Vec::with_capacity(words.len());
    for w in &words {
        let tr = w.markov_trace()?;
        lhs.push(tr.eval(&weights));
        let mut row = Vec::with_capacity(sectors.len());
        for &(l, sl, sr) in &sectors {
            let t = sector_trace(w, l, mode, (sl, sr), false)?;
            row.push(t.eval(&weights));
        }
        rows.push(row);
    }

    let coefs: Vec<f64> = match mode {
        BoundaryMode::TwoBoundary => {
            let a = nalgebra::DMatrix::from_fn(words.len(), sectors.len(), |i, j| rows[i][j]);
            let b = nalgebra::DVector::from_fn(words.len(), |i, _| lhs[i]);
            let svd = a.svd(true, true);
            let sol = svd
                .solve(&b, 1e-12)
                .map_err(|_| AlgebraError::NumericalFailure("least-squares solve"))?;
            sol.iter().copied().collect()
        }
        _ => sectors
            .iter()
            .map(|&(l, sl, _)| known_coefficient(l, sl).eval(&weights))
            .collect(),
    };

    // residual over the fit sample plus a fresh held-out batch
    let mut max_residual: f64 = 0.0;
    for (i, row) in rows.iter().enumerate() {
        let rhs: f64 = row.iter().zip(&coefs).map(|(a, c)| a * c).sum();
        max_residual = max_residual.max((rhs - lhs[i]).abs());
    }
    for k in 0..trials {
        let len = 1 + k % (2 * n);
        let w = random_word(n, len, mode, &mut rng);
        if w.is_zero() {
            continue;
        }
        let l = w.markov_trace()?.eval(&weights);
        let mut r = 0.0;
        for (&(sl_n, sl, sr), c) in sectors.iter().zip(&coefs) {
            r += sector_trace(&w, sl_n, mode, (sl, sr), false)?.eval(&weights) * c;
        }
        max_residual = max_residual.max((r - l).abs());
    }

    Ok(MarkovReport {
        mode,
        trials,
        max_residual,
        solved_coefficients: (mode == BoundaryMode::TwoBoundary).then(|| {
            sectors
                .iter()
                .copied()
                .zip(coefs.iter().copied())
                .collect()
        }),
    })
}

/// Exact polynomial Markov identity for a single blobless or one-boundary
/// diagram: `Tr A - Σ coef_σ tr_σ A`, which must be the zero polynomial.
pub fn markov_identity_defect(
    d: &Diagram,
    mode: BoundaryMode,
) -> Result<WeightPolynomial, AlgebraError> {
    assert!(mode != BoundaryMode::TwoBoundary);
    let n = d.n_bot();
    let mut rhs = WeightPolynomial::zero();
    for (l, sl, sr) in sector_list(n, mode) {
        let tr = sector_trace(d, l, mode, (sl, sr), false)?;
        rhs = rhs + &known_coefficient(l, sl) * &tr;
    }
    Ok(d.markov_trace()? - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_algebra::poly::Symbol;

    fn poly_n(k: u8) -> WeightPolynomial {
        let mut p = WeightPolynomial::one();
        for _ in 0..k {
            p = p * WeightPolynomial::symbol(Symbol::N);
        }
        p
    }

    /// The worked 4-strand example: b1-t1 through line, b2-t4 through line,
    /// arc b3-b4, arc t2-t3, times three closed loops.
    fn example_m() -> Diagram {
        let mut d = Diagram::blank(4, 4);
        d.connect(0, 4);
        d.connect(1, 7);
        d.connect(2, 3);
        d.connect(5, 6);
        d.weight = poly_n(3);
        d.validate().unwrap();
        d
    }

    #[test]
    fn markov_trace_of_example_is_n5() {
        assert_eq!(example_m().markov_trace().unwrap(), poly_n(5));
    }

    #[test]
    fn sector_traces_of_example() {
        let m = example_m();
        let t0 = sector_trace(&m, 0, BoundaryMode::Blobless, (Mark::None, Mark::None), false)
            .unwrap();
        let t2 = sector_trace(&m, 2, BoundaryMode::Blobless, (Mark::None, Mark::None), false)
            .unwrap();
        let t4 = sector_trace(&m, 4, BoundaryMode::Blobless, (Mark::None, Mark::None), false)
            .unwrap();
        assert_eq!(t0, poly_n(3));
        assert_eq!(t2, poly_n(3));
        assert!(t4.is_zero());
    }

    #[test]
    fn identity_trace_counts_dimensions() {
        // Tr Id = n^N; sector traces give dim(V_L)
        for n in 2..=5 {
            let id = Diagram::identity(n);
            assert_eq!(id.markov_trace().unwrap(), poly_n(n as u8));
            assert!(markov_identity_defect(&id, BoundaryMode::Blobless)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn tl_relations() {
        let n = 4;
        let e1 = Diagram::tl_e(n, 1);
        // e_i e_i = n e_i
        let sq = e1.compose(&e1).unwrap();
        assert_eq!(sq.weight(), &poly_n(1));
        let mut expect = e1.clone();
        expect.weight = poly_n(0);
        let mut got = sq.clone();
        got.weight = poly_n(0);
        assert_eq!(got, expect);
        // e1 e2 e1 = e1
        let e2 = Diagram::tl_e(n, 2);
        let w = e1.compose(&e2).unwrap().compose(&e1).unwrap();
        let mut wn = w.clone();
        wn.weight = poly_n(0);
        assert_eq!(wn, expect);
        assert_eq!(w.weight(), &poly_n(0));
    }

    #[test]
    fn projector_relations() {
        let n = 3;
        let b = Diagram::blob_left(n);
        let u = Diagram::unblob_left(n);
        // b b = b (no extra weight)
        let bb = b.compose(&b).unwrap();
        assert_eq!(bb, b);
        // u u = u
        assert_eq!(u.compose(&u).unwrap(), u);
        // b u = 0
        assert!(b.compose(&u).unwrap().is_zero());
        // identity ∘ d = d
        let id = Diagram::identity(n);
        let e = Diagram::tl_e(n, 0);
        assert_eq!(id.compose(&e).unwrap(), e);
    }

    #[test]
    fn blob_loop_weight() {
        // closing a blobbed arc gives n1: e_0 b e_0 = n1 e_0 on two strands
        let e = Diagram::tl_e(2, 0);
        let b = Diagram::blob_left(2);
        let w = e.compose(&b).unwrap().compose(&e).unwrap();
        assert_eq!(w.weight(), &WeightPolynomial::symbol(Symbol::N1));
    }

    #[test]
    fn trace_is_cyclic() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let a = random_word(4, 5, BoundaryMode::TwoBoundary, &mut rng);
            let b = random_word(4, 5, BoundaryMode::TwoBoundary, &mut rng);
            let ab = a.compose(&b).unwrap().markov_trace().unwrap();
            let ba = b.compose(&a).unwrap().markov_trace().unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn markov_identity_exact_small() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in 2..=5 {
            for _ in 0..20 {
                let len = 1 + (n as usize);
                let w = random_word(n, len, BoundaryMode::OneBoundary, &mut rng);
                if w.is_zero() {
                    continue;
                }
                let defect = markov_identity_defect(&w, BoundaryMode::OneBoundary).unwrap();
                assert!(defect.is_zero_normalized(), "defect {defect} for N={n}");
            }
        }
    }

    #[test]
    fn markov_identity_numeric_all_modes() {
        for mode in [
            BoundaryMode::Blobless,
            BoundaryMode::OneBoundary,
            BoundaryMode::TwoBoundary,
        ] {
            let rep = markov_identity_check(4, 40, 7, mode).unwrap();
            assert!(
                rep.max_residual < 1e-10,
                "mode {mode:?}: residual {}",
                rep.max_residual
            );
        }
    }

    #[test]
    fn all_tl_diagrams_count() {
        assert_eq!(all_tl_diagrams(3).len(), 5);
        assert_eq!(all_tl_diagrams(4).len(), 14);
    }
}
