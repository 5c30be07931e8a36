//! Dilute link patterns: the connectivity states of strip edges.
//!
//! A pattern assigns each of the `N` edges of a strip cross-section one of:
//! empty, end of a planar arc, a string (defect line running to infinity),
//! or an end anchored on the left/right boundary (open boundary conditions).
//! Components may carry boundary marks: a *blob* (left boundary) and/or a
//! *white blob* (right boundary), plus the orthogonal *unblob* projectors
//! used by sector decompositions.

use std::fmt;

/// Per-side mark carried by a connectivity component.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum Mark {
    #[default]
    None,
    /// Blob projector (the loop has touched this boundary).
    Blob,
    /// Orthogonal projector `1 - blob`; appears in sector bases, not in
    /// plain diagram products.
    Unblob,
}

impl Mark {
    /// Projector composition. `None` is the algebra unit; blob and unblob
    /// are idempotent and kill each other.
    pub fn merge(self, other: Mark) -> Option<Mark> {
        match (self, other) {
            (Mark::None, m) | (m, Mark::None) => Some(m),
            (Mark::Blob, Mark::Blob) => Some(Mark::Blob),
            (Mark::Unblob, Mark::Unblob) => Some(Mark::Unblob),
            _ => None,
        }
    }

    fn code(self) -> u8 {
        match self {
            Mark::None => 0,
            Mark::Blob => 1,
            Mark::Unblob => 2,
        }
    }

    fn from_code(c: u8) -> Mark {
        match c {
            0 => Mark::None,
            1 => Mark::Blob,
            2 => Mark::Unblob,
            _ => unreachable!(),
        }
    }
}

/// State of a single edge slot.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Site {
    Empty,
    /// End of an arc; the partner edge index is stored separately.
    Arc,
    String,
    /// Free end of a component whose other end terminated on the left boundary.
    AnchorLeft,
    /// Same for the right boundary.
    AnchorRight,
}

pub const NO_PARTNER: u8 = u8::MAX;

/// A dilute, non-crossing connectivity state of `n` strip edges.
///
/// Marks are stored on the *component key site*: the opening (leftmost) end
/// of an arc, or the site of a string/anchored end.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinkPattern {
    site: Vec<Site>,
    partner: Vec<u8>,
    lmark: Vec<Mark>,
    rmark: Vec<Mark>,
}

impl LinkPattern {
    pub fn empty(n: usize) -> Self {
        LinkPattern {
            site: vec![Site::Empty; n],
            partner: vec![NO_PARTNER; n],
            lmark: vec![Mark::None; n],
            rmark: vec![Mark::None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.site.len()
    }

    pub fn is_empty(&self) -> bool {
        self.site.iter().all(|s| *s == Site::Empty)
    }

    pub fn site(&self, i: usize) -> Site {
        self.site[i]
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        if self.site[i] == Site::Arc {
            Some(self.partner[i] as usize)
        } else {
            None
        }
    }

    /// Key site of the component whose end sits at `i`.
    pub fn key_site(&self, i: usize) -> usize {
        match self.site[i] {
            Site::Arc => i.min(self.partner[i] as usize),
            _ => i,
        }
    }

    pub fn lmark(&self, i: usize) -> Mark {
        self.lmark[self.key_site(i)]
    }

    pub fn rmark(&self, i: usize) -> Mark {
        self.rmark[self.key_site(i)]
    }

    pub fn marks(&self, i: usize) -> (Mark, Mark) {
        let k = self.key_site(i);
        (self.lmark[k], self.rmark[k])
    }

    pub fn set_site(&mut self, i: usize, s: Site) {
        self.site[i] = s;
        if s != Site::Arc {
            self.partner[i] = NO_PARTNER;
        }
    }

    pub fn set_arc(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        self.site[i] = Site::Arc;
        self.site[j] = Site::Arc;
        self.partner[i] = j as u8;
        self.partner[j] = i as u8;
    }

    pub fn set_marks(&mut self, key: usize, lm: Mark, rm: Mark) {
        self.lmark[key] = lm;
        self.rmark[key] = rm;
    }

    pub fn clear_marks(&mut self, key: usize) {
        self.lmark[key] = Mark::None;
        self.rmark[key] = Mark::None;
    }

    pub fn string_count(&self) -> usize {
        self.site.iter().filter(|s| **s == Site::String).count()
    }

    pub fn leftmost_string(&self) -> Option<usize> {
        self.site.iter().position(|s| *s == Site::String)
    }

    pub fn rightmost_string(&self) -> Option<usize> {
        self.site.iter().rposition(|s| *s == Site::String)
    }

    /// An arc is nested when another arc strictly encloses it.
    pub fn is_nested(&self, i: usize) -> bool {
        let (a, b) = match self.site[i] {
            Site::Arc => (self.key_site(i), i.max(self.partner[i] as usize)),
            _ => (i, i),
        };
        (0..a).any(|j| self.site[j] == Site::Arc && self.partner[j] as usize > b)
    }

    /// May the component at `i` carry a left (blob-side) mark?
    ///
    /// Arcs: not nested and entirely left of the leftmost string. Strings:
    /// only the leftmost one. Anchored ends never carry blobs.
    pub fn left_markable(&self, i: usize) -> bool {
        match self.site[i] {
            Site::Arc => {
                let b = i.max(self.partner[i] as usize);
                !self.is_nested(i) && self.leftmost_string().map_or(true, |s| b < s)
            }
            Site::String => self.leftmost_string() == Some(i),
            _ => false,
        }
    }

    pub fn right_markable(&self, i: usize) -> bool {
        match self.site[i] {
            Site::Arc => {
                let a = self.key_site(i);
                !self.is_nested(i) && self.rightmost_string().map_or(true, |s| a > s)
            }
            Site::String => self.rightmost_string() == Some(i),
            _ => false,
        }
    }

    /// Structural invariants: planarity, mark placement, anchor ordering.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.len();
        let mut depth = 0usize;
        let mut seen_string = false;
        let mut seen_anchor_r = false;
        for i in 0..n {
            match self.site[i] {
                Site::Empty => {}
                Site::Arc => {
                    let j = self.partner[i] as usize;
                    if j >= n || self.site[j] != Site::Arc || self.partner[j] as usize != i || j == i
                    {
                        return Err(format!("bad arc partner at {i}"));
                    }
                    if j > i {
                        depth += 1;
                    } else {
                        if depth == 0 {
                            return Err(format!("unbalanced arc close at {i}"));
                        }
                        depth -= 1;
                    }
                }
                Site::String => {
                    if depth > 0 {
                        return Err(format!("string inside an arc at {i}"));
                    }
                    if seen_anchor_r {
                        return Err(format!("string right of a right anchor at {i}"));
                    }
                    seen_string = true;
                }
                Site::AnchorLeft => {
                    if depth > 0 || seen_string || seen_anchor_r {
                        return Err(format!("misplaced left anchor at {i}"));
                    }
                }
                Site::AnchorRight => {
                    if depth > 0 {
                        return Err(format!("anchored end inside an arc at {i}"));
                    }
                    seen_anchor_r = true;
                }
            }
        }
        if depth != 0 {
            return Err("unclosed arc".into());
        }
        // arcs may not span strings or anchors
        for i in 0..n {
            if self.site[i] == Site::Arc {
                let j = self.partner[i] as usize;
                if j > i {
                    for k in i + 1..j {
                        if matches!(
                            self.site[k],
                            Site::String | Site::AnchorLeft | Site::AnchorRight
                        ) {
                            return Err(format!("arc ({i},{j}) spans a defect at {k}"));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let keyed = self.key_site(i) == i;
            if !keyed && (self.lmark[i] != Mark::None || self.rmark[i] != Mark::None) {
                return Err(format!("mark stored off the key site at {i}"));
            }
            if keyed && self.lmark[i] != Mark::None && !self.left_markable(i) {
                return Err(format!("left mark on non-markable component at {i}"));
            }
            if keyed && self.rmark[i] != Mark::None && !self.right_markable(i) {
                return Err(format!("right mark on non-markable component at {i}"));
            }
        }
        Ok(())
    }

    /// Packed canonical code; 5 bits per site, lexicographic in site order.
    pub fn encode(&self) -> u128 {
        assert!(self.len() <= 25, "pattern too wide to encode");
        let mut code: u128 = 0;
        for i in 0..self.len() {
            let sym: u8 = match self.site[i] {
                Site::Empty => 0,
                Site::Arc => {
                    if (self.partner[i] as usize) > i {
                        1 + self.lmark[i].code() * 3 + self.rmark[i].code()
                    } else {
                        10
                    }
                }
                Site::String => 11 + self.lmark[i].code() * 3 + self.rmark[i].code(),
                Site::AnchorLeft => 20,
                Site::AnchorRight => 21,
            };
            code |= (sym as u128) << (5 * i);
        }
        code
    }

    pub fn decode(code: u128, n: usize) -> Self {
        let mut p = LinkPattern::empty(n);
        let mut stack: Vec<usize> = Vec::new();
        for i in 0..n {
            let sym = ((code >> (5 * i)) & 0x1f) as u8;
            match sym {
                0 => {}
                1..=9 => {
                    p.site[i] = Site::Arc;
                    p.lmark[i] = Mark::from_code((sym - 1) / 3);
                    p.rmark[i] = Mark::from_code((sym - 1) % 3);
                    stack.push(i);
                }
                10 => {
                    let j = stack.pop().expect("unbalanced code");
                    p.site[i] = Site::Arc;
                    p.partner[i] = j as u8;
                    p.partner[j] = i as u8;
                }
                11..=19 => {
                    p.site[i] = Site::String;
                    p.lmark[i] = Mark::from_code((sym - 11) / 3);
                    p.rmark[i] = Mark::from_code((sym - 11) % 3);
                }
                20 => p.site[i] = Site::AnchorLeft,
                21 => p.site[i] = Site::AnchorRight,
                _ => panic!("bad symbol in pattern code"),
            }
        }
        debug_assert!(stack.is_empty());
        p
    }
}

impl fmt::Display for LinkPattern {
    /// Bracket dump: `.` empty, `(`/`)` arcs, `|` string, `<`/`>` anchored
    /// ends; marks appended to the key site (`b`/`u` left, `w`/`v` right).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            let c = match self.site[i] {
                Site::Empty => '.',
                Site::Arc => {
                    if (self.partner[i] as usize) > i {
                        '('
                    } else {
                        ')'
                    }
                }
                Site::String => '|',
                Site::AnchorLeft => '<',
                Site::AnchorRight => '>',
            };
            write!(f, "{c}")?;
            if self.key_site(i) == i {
                match self.lmark[i] {
                    Mark::None => {}
                    Mark::Blob => write!(f, "b")?,
                    Mark::Unblob => write!(f, "u")?,
                }
                match self.rmark[i] {
                    Mark::None => {}
                    Mark::Blob => write!(f, "w")?,
                    Mark::Unblob => write!(f, "v")?,
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for LinkPattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut sites = Vec::new();
        let mut lmarks = Vec::new();
        let mut rmarks = Vec::new();
        for ch in s.chars() {
            match ch {
                '.' => sites.push(Site::Empty),
                '(' | ')' => sites.push(Site::Arc),
                '|' => sites.push(Site::String),
                '<' => sites.push(Site::AnchorLeft),
                '>' => sites.push(Site::AnchorRight),
                'b' | 'u' => {
                    let i = sites.len().checked_sub(1).ok_or("mark before any site")?;
                    while lmarks.len() < sites.len() {
                        lmarks.push((usize::MAX, Mark::None));
                    }
                    lmarks[i] = (i, if ch == 'b' { Mark::Blob } else { Mark::Unblob });
                }
                'w' | 'v' => {
                    let i = sites.len().checked_sub(1).ok_or("mark before any site")?;
                    while rmarks.len() < sites.len() {
                        rmarks.push((usize::MAX, Mark::None));
                    }
                    rmarks[i] = (i, if ch == 'w' { Mark::Blob } else { Mark::Unblob });
                }
                c if c.is_whitespace() => {}
                c => return Err(format!("bad pattern char {c:?}")),
            }
        }
        let n = sites.len();
        let mut p = LinkPattern::empty(n);
        let mut stack = Vec::new();
        let mut opens: Vec<bool> = s
            .chars()
            .filter(|c| ['.', '(', ')', '|', '<', '>'].contains(c))
            .map(|c| c == '(')
            .collect();
        debug_assert_eq!(opens.len(), n);
        for i in 0..n {
            match sites[i] {
                Site::Arc => {
                    if opens[i] {
                        stack.push(i);
                    } else {
                        let j = stack.pop().ok_or("unbalanced ')'")?;
                        p.set_arc(j, i);
                    }
                }
                s => p.set_site(i, s),
            }
            opens[i] = false;
        }
        if !stack.is_empty() {
            return Err("unbalanced '('".into());
        }
        for (i, m) in lmarks.into_iter().enumerate() {
            if m.1 != Mark::None {
                p.lmark[i] = m.1;
            }
        }
        for (i, m) in rmarks.into_iter().enumerate() {
            if m.1 != Mark::None {
                p.rmark[i] = m.1;
            }
        }
        p.validate()?;
        Ok(p)
    }
}

/// Which boundaries may deposit blob marks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryMode {
    /// Plain Temperley-Lieb: no marks anywhere.
    Blobless,
    /// Marks from the left boundary only.
    OneBoundary,
    /// Marks from both boundaries.
    TwoBoundary,
}

/// Basis request for [`enumerate_basis`].
#[derive(Clone, Copy, Debug)]
pub struct BasisSpec {
    pub strings: usize,
    pub mode: BoundaryMode,
    /// Empty sites allowed (dilute model) or full packing.
    pub dilute: bool,
}

/// All valid patterns for the requested sector, in canonical order
/// (ascending packed code, i.e. lexicographic in site states).
///
/// Marks are enumerated on markable *arcs* (`None`/`Blob` per admissible
/// side); string marks are sector data and left unset here.
pub fn enumerate_basis(n: usize, spec: &BasisSpec) -> Result<Vec<LinkPattern>, String> {
    if spec.strings > n {
        return Err(format!("string count {} exceeds {n} sites", spec.strings));
    }
    if !spec.dilute && (n - spec.strings) % 2 != 0 {
        return Err(format!(
            "packed sector needs N - L even, got N={n}, L={}",
            spec.strings
        ));
    }
    let mut shapes = Vec::new();
    let mut sites = vec![Site::Empty; n];
    let mut partner = vec![NO_PARTNER; n];
    let mut stack: Vec<usize> = Vec::new();
    enumerate_shapes(
        n,
        spec,
        0,
        0,
        &mut sites,
        &mut partner,
        &mut stack,
        &mut shapes,
    );
    let mut out = Vec::new();
    for (s, p) in shapes {
        let mut base = LinkPattern::empty(n);
        base.site = s;
        base.partner = p;
        expand_marks(&base, spec.mode, &mut out);
    }
    out.sort_by_key(|p| p.encode());
    for p in &out {
        debug_assert!(p.validate().is_ok(), "invalid pattern {p}");
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_shapes(
    n: usize,
    spec: &BasisSpec,
    pos: usize,
    strings_placed: usize,
    sites: &mut Vec<Site>,
    partner: &mut Vec<u8>,
    stack: &mut Vec<usize>,
    out: &mut Vec<(Vec<Site>, Vec<u8>)>,
) {
    if pos == n {
        if stack.is_empty() && strings_placed == spec.strings {
            out.push((sites.clone(), partner.clone()));
        }
        return;
    }
    let remaining = n - pos;
    // prune: must still fit open arcs and missing strings
    if stack.len() + (spec.strings - strings_placed) > remaining {
        return;
    }
    if spec.dilute {
        sites[pos] = Site::Empty;
        enumerate_shapes(n, spec, pos + 1, strings_placed, sites, partner, stack, out);
    }
    // open an arc
    sites[pos] = Site::Arc;
    stack.push(pos);
    enumerate_shapes(n, spec, pos + 1, strings_placed, sites, partner, stack, out);
    stack.pop();
    // close an arc
    if let Some(&j) = stack.last() {
        stack.pop();
        sites[pos] = Site::Arc;
        partner[pos] = j as u8;
        partner[j] = pos as u8;
        enumerate_shapes(n, spec, pos + 1, strings_placed, sites, partner, stack, out);
        partner[pos] = NO_PARTNER;
        partner[j] = NO_PARTNER;
        stack.push(j);
    }
    // place a string (only at depth zero)
    if stack.is_empty() && strings_placed < spec.strings {
        sites[pos] = Site::String;
        enumerate_shapes(
            n,
            spec,
            pos + 1,
            strings_placed + 1,
            sites,
            partner,
            stack,
            out,
        );
    }
    sites[pos] = Site::Empty;
}

fn expand_marks(base: &LinkPattern, mode: BoundaryMode, out: &mut Vec<LinkPattern>) {
    let mut markable: Vec<(usize, bool, bool)> = Vec::new();
    if mode != BoundaryMode::Blobless {
        for i in 0..base.len() {
            if base.site(i) == Site::Arc && base.key_site(i) == i {
                let l = base.left_markable(i);
                let r = mode == BoundaryMode::TwoBoundary && base.right_markable(i);
                if l || r {
                    markable.push((i, l, r));
                }
            }
        }
    }
    let mut work = vec![base.clone()];
    for (key, l, r) in markable {
        let mut next = Vec::with_capacity(work.len() * 2);
        for p in &work {
            let lopts: &[Mark] = if l {
                &[Mark::None, Mark::Blob]
            } else {
                &[Mark::None]
            };
            let ropts: &[Mark] = if r {
                &[Mark::None, Mark::Blob]
            } else {
                &[Mark::None]
            };
            for &lm in lopts {
                for &rm in ropts {
                    let mut q = p.clone();
                    q.set_marks(key, lm, rm);
                    next.push(q);
                }
            }
        }
        work = next;
    }
    out.append(&mut work);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(k: usize) -> usize {
        // C_k = (2k)! / (k! (k+1)!)
        let mut c = 1usize;
        for i in 0..k {
            c = c * 2 * (2 * i + 1) / (i + 2);
        }
        c
    }

    fn basis(n: usize, l: usize, mode: BoundaryMode, dilute: bool) -> Vec<LinkPattern> {
        enumerate_basis(
            n,
            &BasisSpec {
                strings: l,
                mode,
                dilute,
            },
        )
        .unwrap()
    }

    #[test]
    fn packed_blobless_counts_are_ballot_numbers() {
        // dim V_L = C(N, (N-L)/2) - C(N, (N-L)/2 - 1)
        let choose = |n: usize, k: usize| -> usize {
            if k > n {
                return 0;
            }
            (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
        };
        for n in 1..=8 {
            for l in 0..=n {
                if (n - l) % 2 != 0 {
                    continue;
                }
                let k = (n - l) / 2;
                let expect = choose(n, k) - if k == 0 { 0 } else { choose(n, k - 1) };
                assert_eq!(
                    basis(n, l, BoundaryMode::Blobless, false).len(),
                    expect,
                    "N={n} L={l}"
                );
            }
        }
    }

    #[test]
    fn catalan_count_for_packed_no_strings() {
        for half in 1..=6 {
            let n = 2 * half;
            assert_eq!(basis(n, 0, BoundaryMode::Blobless, false).len(), catalan(half));
        }
    }

    #[test]
    fn paper_style_small_sectors() {
        // V4 of TL_4 is the single all-strings diagram
        assert_eq!(basis(4, 4, BoundaryMode::OneBoundary, false).len(), 1);
        // V2 of TL_4 has three blobless half-diagrams
        assert_eq!(basis(4, 2, BoundaryMode::Blobless, false).len(), 3);
        // dilute two-site no-string sector: empty-empty and one arc
        assert_eq!(basis(2, 0, BoundaryMode::Blobless, true).len(), 2);
    }

    #[test]
    fn one_boundary_packed_counts_are_binomials() {
        // blob-algebra standard modules have dim C(N, (N-L)/2)
        let choose = |n: usize, k: usize| -> usize {
            (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
        };
        for n in 1..=8 {
            for l in 0..=n {
                if (n - l) % 2 != 0 {
                    continue;
                }
                assert_eq!(
                    basis(n, l, BoundaryMode::OneBoundary, false).len(),
                    choose(n, (n - l) / 2),
                    "N={n} L={l}"
                );
            }
        }
    }

    #[test]
    fn rejects_too_many_strings() {
        assert!(enumerate_basis(
            3,
            &BasisSpec {
                strings: 4,
                mode: BoundaryMode::Blobless,
                dilute: true
            }
        )
        .is_err());
    }

    #[test]
    fn codes_roundtrip_and_orderings_are_stable() {
        let b = basis(6, 2, BoundaryMode::TwoBoundary, true);
        let mut prev = None;
        for p in &b {
            let code = p.encode();
            assert_eq!(LinkPattern::decode(code, 6), *p);
            if let Some(q) = prev {
                assert!(code > q, "canonical order must be strictly increasing");
            }
            prev = Some(code);
        }
    }

    #[test]
    fn display_parse_roundtrip() {
        let b = basis(5, 1, BoundaryMode::TwoBoundary, true);
        for p in &b {
            let s = p.to_string();
            let q: LinkPattern = s.parse().unwrap();
            assert_eq!(&q, p, "roundtrip of {s}");
        }
    }

    #[test]
    fn mark_placement_rules() {
        let p: LinkPattern = "(.)(())".parse().unwrap();
        assert!(p.left_markable(0));
        assert!(p.left_markable(3)); // second outer arc: not nested
        assert!(!p.left_markable(4)); // nested arc
        let q: LinkPattern = "(.)|()".parse().unwrap();
        assert!(q.left_markable(0));
        assert!(!q.left_markable(4)); // right of the string
        assert!(q.right_markable(4));
        assert!(!q.right_markable(0));
        assert!(q.left_markable(3)); // leftmost (only) string
    }
}
