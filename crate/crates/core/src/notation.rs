//! Knot diagrams from PD codes and braid words, their Wirtinger
//! presentations, and the Goeritz determinant.
//!
//! PD convention: each crossing `X(a,b,c,d)` lists its four edges
//! counterclockwise starting from the incoming under-strand, so the
//! under-strand runs `a -> c` and the over-strand joins `b` and `d`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::freegroup::{GroupPresentation, Word};
use crate::laurent::integer;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotationError {
    #[error("empty input")]
    Empty,
    #[error("malformed {what} at byte {pos}: {reason}")]
    Syntax { what: &'static str, pos: usize, reason: String },
    #[error("edge label {label} appears {count} times (expected 2)")]
    LabelCount { label: usize, count: usize },
    #[error("diagram has {0} components, expected a knot")]
    Components(usize),
    #[error("crossing {crossing} is entered along its outgoing under-strand; not a valid PD orientation")]
    Orientation { crossing: usize },
    #[error("braid letter {letter} out of range for {strands} strands")]
    BraidLetter { letter: i64, strands: usize },
    #[error("diagram is not planar ({faces} faces for {crossings} crossings)")]
    NotPlanar { faces: usize, crossings: usize },
}

/// A single-component knot diagram with edges labelled `1..=2n` in
/// traversal order, starting at the incoming under-strand of crossing 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnotDiagram {
    crossings: Vec<[usize; 4]>,
    arc_count: usize,
    name: Option<String>,
}

impl KnotDiagram {
    pub fn unknot() -> Self {
        KnotDiagram { crossings: Vec::new(), arc_count: 1, name: None }
    }

    /// Validates and relabels raw crossing tuples.
    pub fn from_crossings(raw: Vec<[usize; 4]>) -> Result<Self, NotationError> {
        if raw.is_empty() {
            return Ok(Self::unknot());
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &raw {
            for &l in c {
                *counts.entry(l).or_default() += 1;
            }
        }
        if let Some((&label, &count)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(NotationError::LabelCount { label, count });
        }
        let components = component_count(&raw);
        if components != 1 {
            return Err(NotationError::Components(components));
        }
        let n = raw.len();
        let occurrences = occurrence_index(&raw);
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order: Vec<usize> = Vec::with_capacity(2 * n);
        let (mut c, mut s) = (0usize, 0usize);
        loop {
            if s == 2 {
                return Err(NotationError::Orientation { crossing: c });
            }
            let out = raw[c][(s + 2) % 4];
            order.push(out);
            let (nc, ns) = other_end(&occurrences, out, (c, (s + 2) % 4));
            c = nc;
            s = ns;
            if (c, s) == (0, 0) || order.len() > 2 * n {
                break;
            }
        }
        if order.len() != 2 * n || (c, s) != (0, 0) {
            return Err(NotationError::Orientation { crossing: c });
        }
        let last = order.len() - 1;
        for (i, &l) in order.iter().enumerate() {
            relabel.insert(l, if i == last { 1 } else { i + 2 });
        }
        let crossings = raw.iter().map(|c| c.map(|l| relabel[&l])).collect();
        Ok(KnotDiagram { crossings, arc_count: 2 * n, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of edge labels: `2n`, or 1 for the crossingless unknot.
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `+1` if the over-strand enters at slot `d`, else `-1`. After
    /// relabelling, consecutive labels follow the orientation.
    pub fn crossing_sign(&self, i: usize) -> i8 {
        let [_, b, _, d] = self.crossings[i];
        let m = self.arc_count;
        if b == d % m + 1 {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.crossing_count()).map(|i| i64::from(self.crossing_sign(i))).sum()
    }
}

impl fmt::Display for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.crossings.iter().map(|[a, b, c, d]| format!("X({a},{b},{c},{d})")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for KnotDiagram {
    type Err = NotationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim_start().starts_with("braid") {
            parse_braid(s)
        } else {
            parse_pd(s)
        }
    }
}

fn occurrence_index(raw: &[[usize; 4]]) -> BTreeMap<usize, Vec<(usize, usize)>> {
    let mut occ: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, tuple) in raw.iter().enumerate() {
        for (s, &l) in tuple.iter().enumerate() {
            occ.entry(l).or_default().push((c, s));
        }
    }
    occ
}

fn other_end(occ: &BTreeMap<usize, Vec<(usize, usize)>>, label: usize, here: (usize, usize)) -> (usize, usize) {
    let ends = &occ[&label];
    if ends[0] == here {
        ends[1]
    } else {
        ends[0]
    }
}

/// Number of closed strands: edges are joined through each crossing along
/// `a-c` and `b-d`.
pub fn component_count(raw: &[[usize; 4]]) -> usize {
    let labels: Vec<usize> = {
        let mut v: Vec<usize> = raw.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let index: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for [a, b, c, d] in raw {
        uf.union(index[a], index[c]);
        uf.union(index[b], index[d]);
    }
    uf.classes()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
    what: &'static str,
}

impl Scanner<'_> {
    fn err(&self, reason: impl Into<String>) -> NotationError {
        NotationError::Syntax { what: self.what, pos: self.pos, reason: reason.into() }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), NotationError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> Result<i64, NotationError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')))
            .count();
        let v = rest[..len].parse::<i64>().map_err(|_| self.err("expected an integer"))?;
        self.pos += len;
        Ok(v)
    }
}

/// Parses whitespace-separated `X(a,b,c,d)` tokens.
pub fn parse_pd(text: &str) -> Result<KnotDiagram, NotationError> {
    if text.trim().is_empty() {
        return Err(NotationError::Empty);
    }
    let mut sc = Scanner { text, pos: 0, what: "PD code" };
    let mut raw = Vec::new();
    while !sc.at_end() {
        if !sc.eat('X') {
            return Err(sc.err("expected 'X('"));
        }
        sc.expect('(')?;
        let mut tuple = [0usize; 4];
        for (i, slot) in tuple.iter_mut().enumerate() {
            if i > 0 {
                sc.expect(',')?;
            }
            let v = sc.int()?;
            if v < 1 {
                return Err(sc.err("labels must be positive"));
            }
            *slot = v as usize;
        }
        sc.expect(')')?;
        raw.push(tuple);
    }
    KnotDiagram::from_crossings(raw)
}

/// A word in the braid group on `strand_count` strands; letter `i > 0` is
/// the generator `sigma_i`, `-i` its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidWord {
    pub strand_count: usize,
    pub letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strand_count: usize, letters: Vec<i64>) -> Result<Self, NotationError> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strand_count {
                return Err(NotationError::BraidLetter { letter: l, strands: strand_count });
            }
        }
        if strand_count == 0 {
            return Err(NotationError::BraidLetter { letter: 0, strands: 0 });
        }
        Ok(BraidWord { strand_count, letters })
    }

    /// PD tuples of the closure.
    pub fn closure_crossings(&self) -> Vec<[usize; 4]> {
        let n = self.strand_count;
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut next = n + 1;
        let mut raw = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            let (a_in, b_in) = (cur[i], cur[i + 1]);
            let (a_out, b_out) = (next, next + 1);
            next += 2;
            raw.push(if l > 0 { [b_in, a_out, b_out, a_in] } else { [a_in, b_in, a_out, b_out] });
            cur[i] = b_out;
            cur[i + 1] = a_out;
        }
        let top: BTreeMap<usize, usize> =
            cur.iter().enumerate().filter(|(p, &l)| l != p + 1).map(|(p, &l)| (l, p + 1)).collect();
        for tuple in &mut raw {
            for l in tuple.iter_mut() {
                if let Some(&b) = top.get(l) {
                    *l = b;
                }
            }
        }
        raw
    }
}

/// Parses `braid(n; i1 i2 ...)` and returns the diagram of its closure.
pub fn parse_braid(text: &str) -> Result<KnotDiagram, NotationError> {
    if text.trim().is_empty() {
        return Err(NotationError::Empty);
    }
    let mut sc = Scanner { text, pos: 0, what: "braid word" };
    sc.skip_ws();
    if !text[sc.pos..].starts_with("braid") {
        return Err(sc.err("expected 'braid('"));
    }
    sc.pos += "braid".len();
    sc.expect('(')?;
    let n = sc.int()?;
    if n < 1 {
        return Err(sc.err("strand count must be positive"));
    }
    sc.expect(';')?;
    let mut letters = Vec::new();
    while !sc.eat(')') {
        letters.push(sc.int()?);
        sc.eat(',');
    }
    if !sc.at_end() {
        return Err(sc.err("trailing input"));
    }
    let braid = BraidWord::new(n as usize, letters)?;
    let raw = braid.closure_crossings();
    if raw.is_empty() {
        return if braid.strand_count == 1 { Ok(KnotDiagram::unknot()) } else { Err(NotationError::Components(braid.strand_count)) };
    }
    KnotDiagram::from_crossings(raw)
}

/// For each edge label `1..=2n`, the Wirtinger arc containing it.
fn arc_of_edge(d: &KnotDiagram) -> Vec<usize> {
    let m = d.arc_count();
    let mut uf = UnionFind::new(m + 1);
    for &[_, b, _, dd] in d.crossings() {
        uf.union(b, dd);
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = vec![0; m + 1];
    for (e, slot) in out.iter_mut().enumerate().skip(1) {
        let r = uf.find(e);
        let next = ids.len();
        *slot = *ids.entry(r).or_insert(next);
    }
    out
}

/// One generator per arc, one relator `x_o^e x_a x_o^-e x_c^-1` per crossing
/// with incoming under-arc `x_a`, outgoing `x_c`, over-arc `x_o` and sign `e`.
pub fn wirtinger_presentation(d: &KnotDiagram) -> GroupPresentation {
    if d.crossing_count() == 0 {
        return GroupPresentation::new(1, Vec::new()).expect("no relators");
    }
    let arc = arc_of_edge(d);
    let n = d.crossing_count();
    let relators = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(i, &[a, b, c, _])| {
            let e = d.crossing_sign(i);
            let (o, a, c) = (arc[b], arc[a], arc[c]);
            Word::from_pairs(&[(o, e), (a, 1), (o, -e), (c, -1)])
        })
        .collect();
    GroupPresentation::new(n, relators).expect("arc indices below crossing count")
}

/// `|det|` of the Goeritz matrix from a checkerboard colouring, an
/// invariant computed without any Alexander polynomial.
pub fn goeritz_determinant(d: &KnotDiagram) -> Result<BigInt, NotationError> {
    let n = d.crossing_count();
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    let occ = occurrence_index(d.crossings());
    // a dart (c, s) follows edge at slot s to its other end (c', s') and
    // turns to slot s' + 1
    let mut face_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut faces = 0;
    for c in 0..n {
        for s in 0..4 {
            if face_of.contains_key(&(c, s)) {
                continue;
            }
            let mut dart = (c, s);
            while !face_of.contains_key(&dart) {
                face_of.insert(dart, faces);
                let (c2, s2) = other_end(&occ, d.crossings()[dart.0][dart.1], dart);
                dart = (c2, (s2 + 1) % 4);
            }
            faces += 1;
        }
    }
    if faces != n + 2 {
        return Err(NotationError::NotPlanar { faces, crossings: n });
    }
    // the corner of crossing c between slots s and s+1 belongs to the face
    // of the dart leaving at slot s+1
    let corner = |c: usize, s: usize| face_of[&(c, (s + 1) % 4)];

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); faces];
    for c in 0..n {
        for s in 0..4 {
            let (f, g) = (corner(c, s), corner(c, (s + 1) % 4));
            adj[f].push(g);
            adj[g].push(f);
        }
    }
    let mut color: Vec<Option<bool>> = vec![None; faces];
    color[0] = Some(true);
    let mut queue = VecDeque::from([0]);
    while let Some(f) = queue.pop_front() {
        let cf = color[f].expect("queued faces are coloured");
        for &g in &adj[f] {
            match color[g] {
                None => {
                    color[g] = Some(!cf);
                    queue.push_back(g);
                }
                Some(cg) if cg == cf => return Err(NotationError::NotPlanar { faces, crossings: n }),
                _ => {}
            }
        }
    }
    let white: Vec<usize> = (0..faces).filter(|&f| color[f] == Some(true)).collect();
    let index: BTreeMap<usize, usize> = white.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let w = white.len();
    let mut g = vec![vec![BigInt::zero(); w]; w];
    for c in 0..n {
        let (first, second, eta) = if color[corner(c, 0)] == Some(true) {
            (corner(c, 0), corner(c, 2), -1)
        } else {
            (corner(c, 1), corner(c, 3), 1)
        };
        let (i, j) = (index[&first], index[&second]);
        if i != j {
            g[i][j] -= eta;
            g[j][i] -= eta;
            g[i][i] += eta;
            g[j][j] += eta;
        }
    }
    let reduced: Vec<Vec<BigInt>> = g[..w - 1].iter().map(|row| row[..w - 1].to_vec()).collect();
    Ok(integer::determinant(&reduced).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    #[test]
    fn trefoil_parses() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.to_string(), TREFOIL);
        assert_eq!(goeritz_determinant(&d).unwrap(), BigInt::from(3));
        assert_eq!(d.writhe().abs(), 3);
    }

    #[test]
    fn figure_eight_relabels() {
        let d = parse_pd(FIGURE_EIGHT).unwrap();
        assert_eq!(d.crossings()[0][0], 1);
        assert_eq!(d.crossings()[0][2], 2);
        assert_eq!(goeritz_determinant(&d).unwrap(), BigInt::from(5));
        assert_eq!(d.writhe(), 0);
        let p = wirtinger_presentation(&d);
        assert_eq!((p.generator_count(), p.relators().len()), (4, 4));
    }

    #[test]
    fn pd_errors() {
        assert_eq!(parse_pd(""), Err(NotationError::Empty));
        assert!(matches!(parse_pd("X(1,1)"), Err(NotationError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,2,3,4)"), Err(NotationError::LabelCount { .. })));
        assert!(matches!(parse_pd("Y(1,1,2,2)"), Err(NotationError::Syntax { .. })));
        // Hopf link
        assert_eq!(parse_pd("X(1,3,2,4) X(3,1,4,2)"), Err(NotationError::Components(2)));
    }

    #[test]
    fn curl_is_an_unknot() {
        let d = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(d.crossing_count(), 1);
        let p = wirtinger_presentation(&d);
        assert_eq!(p.generator_count(), 1);
        assert!(p.relators()[0].is_empty());
        assert_eq!(goeritz_determinant(&d).unwrap(), BigInt::from(1));
    }

    #[test]
    fn braids() {
        let d = parse_braid("braid(2; 1 1 1)").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(goeritz_determinant(&d).unwrap(), BigInt::from(3));
        assert_eq!(parse_braid("braid(2; 1 1)"), Err(NotationError::Components(2)));
        assert_eq!(parse_braid("braid(1; )").unwrap(), KnotDiagram::unknot());
        assert!(matches!(parse_braid("braid(2; 2)"), Err(NotationError::BraidLetter { .. })));
        assert!(matches!(parse_braid("braid(3; 1 -2 1 -2)"), Ok(d) if d.crossing_count() == 4));
    }
}
