use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::hash::{Hash, Hasher};

use super::{Configuration, GraphNode, Step};

/// Default tolerance on levels and arguments used by [`equals`].
pub const DEFAULT_EQ_TOL: f64 = 1e-7;

/// Quantum for real numbers in the byte form of a code.
const QUANTUM: f64 = 1e-9;

const POINT: u8 = 1;
const GRAPH: u8 = 2;
const STEP: u8 = 3;
const VNEW: u8 = 4;
const VOLD: u8 = 5;
const FNEW: u8 = 6;
const FOLD: u8 = 7;
const END: u8 = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Token {
    Sym(u8),
    Int(i64),
    Level(f64),
    Angle(f64),
}

/// Encoding of a configuration that does not depend on how its vertices and
/// faces are numbered.
///
/// Each graph is encoded by the walk along its unbounded face, labelling
/// vertices and faces by first appearance. The outermost graph uses the
/// smallest code over all starting edges; every child graph starts at the
/// distinguished point its parent's gradient map sends the first
/// distinguished point of the face to, so no further choices are made.
///
/// Equality and hashing use the byte form, in which reals are rounded to
/// multiples of `1e-9`.
#[derive(Clone, Debug)]
pub struct CanonicalCode {
    tokens: Vec<Token>,
    bytes: Vec<u8>,
}

impl CanonicalCode {
    fn new(tokens: Vec<Token>) -> Self {
        let bytes = to_bytes(&tokens);
        CanonicalCode { tokens, bytes }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Token-wise comparison with tolerance on the real entries.
    pub fn matches(&self, other: &CanonicalCode, tol: f64) -> bool {
        tokens_match(&self.tokens, &other.tokens, tol)
    }

    /// Readable form, used in mismatch reports.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for t in &self.tokens {
            let part = match t {
                Token::Sym(POINT) => "P".to_string(),
                Token::Sym(GRAPH) => "G".to_string(),
                Token::Sym(STEP) => "|".to_string(),
                Token::Sym(VNEW) => "v+".to_string(),
                Token::Sym(VOLD) => "v".to_string(),
                Token::Sym(FNEW) => "f+".to_string(),
                Token::Sym(FOLD) => "f".to_string(),
                Token::Sym(END) => ";".to_string(),
                Token::Sym(x) => format!("?{x}"),
                Token::Int(i) => i.to_string(),
                Token::Level(h) => format!("H{h:.6}"),
                Token::Angle(a) => format!("a{a:.6}"),
            };
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(&part);
        }
        s
    }
}

impl PartialEq for CanonicalCode {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl Eq for CanonicalCode {}

impl Hash for CanonicalCode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bytes.hash(state)
    }
}

impl PartialOrd for CanonicalCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

fn quantize(x: f64) -> i64 {
    (x / QUANTUM).round() as i64
}

fn push_i64(out: &mut Vec<u8>, x: i64) {
    // flip the sign bit so that byte order agrees with numeric order
    out.extend_from_slice(&((x as u64) ^ (1 << 63)).to_be_bytes());
}

fn to_bytes(tokens: &[Token]) -> Vec<u8> {
    let mut out = Vec::with_capacity(tokens.len() * 9);
    for t in tokens {
        match *t {
            Token::Sym(s) => out.extend_from_slice(&[0, s]),
            Token::Int(i) => {
                out.push(1);
                push_i64(&mut out, i);
            }
            Token::Level(h) => {
                out.push(2);
                push_i64(&mut out, quantize(h));
            }
            Token::Angle(a) => {
                out.push(3);
                let q = quantize(a);
                // an angle that rounds to 2pi is the same as 0
                let full = quantize(TAU);
                push_i64(&mut out, if q >= full { q - full } else { q });
            }
        }
    }
    out
}

fn tokens_match(a: &[Token], b: &[Token], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (Token::Sym(p), Token::Sym(q)) => p == q,
            (Token::Int(p), Token::Int(q)) => p == q,
            (Token::Level(p), Token::Level(q)) => (p - q).abs() <= tol,
            (Token::Angle(p), Token::Angle(q)) => {
                let d = (p - q).rem_euclid(TAU);
                d.min(TAU - d) <= tol
            }
            _ => false,
        })
}

/// Code of `g` read along the walk from `start`.
fn walk_code(g: &GraphNode, start: Step, out: &mut Vec<Token>) {
    let mut vlabel: HashMap<usize, i64> = HashMap::new();
    let mut flabel: HashMap<usize, i64> = HashMap::new();
    for step in g.walk(start) {
        let (f, i) = step;
        out.push(Token::Sym(STEP));
        let x = g.step_start(step);
        match vlabel.get(&x) {
            Some(&l) => out.extend([Token::Sym(VOLD), Token::Int(l)]),
            None => {
                vlabel.insert(x, vlabel.len() as i64);
                out.extend([Token::Sym(VNEW), Token::Angle(g.args[x])]);
            }
        }
        match flabel.get(&f) {
            Some(&l) => out.extend([Token::Sym(FOLD), Token::Int(l)]),
            None => {
                flabel.insert(f, flabel.len() as i64);
                let face = &g.faces[f];
                out.extend([Token::Sym(FNEW), Token::Int(face.z as i64)]);
                let z = face.z.max(1) as usize;
                let r0 = g.face_entries_before(f, i) % z;
                anchored_code(&face.child, (face.gradient_offset + r0) % z, out);
            }
        }
        out.push(Token::Int(g.faces[f].distinguished[i] as i64));
    }
    out.push(Token::Sym(END));
}

/// Code of a child read from entry `q` of its walk from step `(0, 0)`.
fn anchored_code(c: &Configuration, q: usize, out: &mut Vec<Token>) {
    match c {
        Configuration::Point { z } => out.extend([Token::Sym(POINT), Token::Int(*z as i64)]),
        Configuration::Graph(g) => {
            out.extend([Token::Sym(GRAPH), Token::Level(g.level)]);
            let entries = g.walk_entries((0, 0));
            match entries.get(q) {
                Some(e) => {
                    out.push(Token::Int(e.sub as i64));
                    walk_code(g, e.step, out);
                }
                None => {
                    // only reachable for invalid input
                    out.push(Token::Int(-1));
                    walk_code(g, (0, 0), out);
                }
            }
        }
    }
}

fn rooted_codes(g: &GraphNode) -> impl Iterator<Item = Vec<Token>> + '_ {
    g.all_steps().into_iter().map(move |s| {
        let mut t = vec![Token::Sym(GRAPH), Token::Level(g.level)];
        walk_code(g, s, &mut t);
        t
    })
}

pub fn canonical_code(c: &Configuration) -> CanonicalCode {
    match c {
        Configuration::Point { z } => CanonicalCode::new(vec![Token::Sym(POINT), Token::Int(*z as i64)]),
        Configuration::Graph(g) => rooted_codes(g)
            .map(CanonicalCode::new)
            .min()
            .expect("a graph has at least one edge"),
    }
}

/// Equality of configurations up to orientation-preserving homeomorphism, with
/// levels and arguments compared to within `tol`.
pub fn equals(c1: &Configuration, c2: &Configuration, tol: f64) -> bool {
    let k1 = canonical_code(c1);
    match c2 {
        Configuration::Point { .. } => k1.matches(&canonical_code(c2), tol),
        Configuration::Graph(g) => rooted_codes(g).any(|t| tokens_match(&k1.tokens, &t, tol)),
    }
}
