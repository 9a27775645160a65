//! Operators built from factors `∂_D P^{ij}` as contraction graphs.
//!
//! Every upper index of a factor is contracted with exactly one derivative,
//! sitting either on another factor or on an argument. Storing the target
//! of each upper index is therefore the whole wiring: the lower derivative
//! multiset of a factor is the set of upper indices pointing at it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StarError};
use crate::rational::{display_rational, format_rational, parse_rational, Rational};

/// Where an upper index is contracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Factor(usize),
    Arg(usize),
}

/// One `∂_D P^{ij}`, identified by the targets of `i` and `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PFactor {
    pub upper: [Target; 2],
}

impl PFactor {
    pub fn new(a: Target, b: Target) -> Self {
        PFactor { upper: [a, b] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractTerm {
    pub coefficient: Rational,
    pub arity: usize,
    pub factors: Vec<PFactor>,
}

/// A reordering of the factor list: `order[n]` is the factor placed `n`-th.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement(pub Vec<usize>);

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn cached_permutations(n: usize) -> std::sync::Arc<Vec<Vec<usize>>> {
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Vec<usize>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("permutation cache");
    guard.entry(n).or_insert_with(|| Arc::new(permutations(n))).clone()
}

impl AbstractTerm {
    pub fn new(coefficient: Rational, arity: usize, factors: Vec<PFactor>) -> Result<Self> {
        let t = AbstractTerm {
            coefficient,
            arity,
            factors,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for f in &self.factors {
            for t in f.upper {
                match t {
                    Target::Factor(g) if g >= self.factors.len() => {
                        return Err(StarError::MalformedTerm(format!("factor target {g} out of range")))
                    }
                    Target::Arg(a) if a >= self.arity => {
                        return Err(StarError::MalformedTerm(format!("argument target {a} out of range")))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Number of derivatives sitting on each factor.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.factors.len()];
        for f in &self.factors {
            for t in f.upper {
                if let Target::Factor(g) = t {
                    d[g] += 1;
                }
            }
        }
        d
    }

    /// Differential degree in each argument.
    pub fn arg_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.arity];
        for f in &self.factors {
            for t in f.upper {
                if let Target::Arg(a) = t {
                    d[a] += 1;
                }
            }
        }
        d
    }

    /// Upper-index positions `(factor, side)` contracted with `target`.
    pub fn uppers_at(&self, target: Target) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (f, fac) in self.factors.iter().enumerate() {
            for s in 0..2 {
                if fac.upper[s] == target {
                    out.push((f, s));
                }
            }
        }
        out
    }

    /// The same operator with factors reordered by `arr`.
    pub fn arranged(&self, arr: &Arrangement) -> AbstractTerm {
        let mut pos = vec![0; arr.0.len()];
        for (n, &f) in arr.0.iter().enumerate() {
            pos[f] = n;
        }
        let relabel = |t: Target| match t {
            Target::Factor(g) => Target::Factor(pos[g]),
            a => a,
        };
        let factors = arr
            .0
            .iter()
            .map(|&f| {
                let u = self.factors[f].upper;
                PFactor::new(relabel(u[0]), relabel(u[1]))
            })
            .collect();
        AbstractTerm {
            coefficient: self.coefficient.clone(),
            arity: self.arity,
            factors,
        }
    }

    /// Canonical representative: upper pairs sorted with the sign absorbed,
    /// factor order minimal. `None` when the term vanishes by antisymmetry.
    pub fn canonical(&self) -> Option<AbstractTerm> {
        if self.coefficient.is_zero() {
            return None;
        }
        if self.factors.iter().any(|f| f.upper[0] == f.upper[1]) {
            return None;
        }
        let n = self.factors.len();
        let perms = cached_permutations(n);
        let mut best: Option<(Vec<PFactor>, bool)> = None;
        let mut conflict = false;
        let mut pos = vec![0; n];
        for perm in perms.iter() {
            for (new, &old) in perm.iter().enumerate() {
                pos[old] = new;
            }
            let mut flips = false;
            let mut fs = Vec::with_capacity(n);
            for &old in perm {
                let u = self.factors[old].upper;
                let r = |t: Target| match t {
                    Target::Factor(g) => Target::Factor(pos[g]),
                    a => a,
                };
                let (a, b) = (r(u[0]), r(u[1]));
                if a <= b {
                    fs.push(PFactor::new(a, b));
                } else {
                    flips = !flips;
                    fs.push(PFactor::new(b, a));
                }
            }
            match &best {
                None => best = Some((fs, flips)),
                Some((b, s)) => match fs.cmp(b) {
                    std::cmp::Ordering::Less => {
                        best = Some((fs, flips));
                        conflict = false;
                    }
                    std::cmp::Ordering::Equal if *s != flips => conflict = true,
                    _ => {}
                },
            }
        }
        if conflict {
            return None;
        }
        let (factors, flips) = best.expect("at least one permutation");
        let coefficient = if flips {
            -self.coefficient.clone()
        } else {
            self.coefficient.clone()
        };
        Some(AbstractTerm {
            coefficient,
            arity: self.arity,
            factors,
        })
    }

    /// Exchanges two arguments.
    pub fn swap_args(&self, a: usize, b: usize) -> AbstractTerm {
        let r = |t: Target| match t {
            Target::Arg(x) if x == a => Target::Arg(b),
            Target::Arg(x) if x == b => Target::Arg(a),
            t => t,
        };
        AbstractTerm {
            coefficient: self.coefficient.clone(),
            arity: self.arity,
            factors: self
                .factors
                .iter()
                .map(|f| PFactor::new(r(f.upper[0]), r(f.upper[1])))
                .collect(),
        }
    }

    pub fn scaled(&self, s: &Rational) -> AbstractTerm {
        AbstractTerm {
            coefficient: &self.coefficient * s,
            ..self.clone()
        }
    }

    pub fn parse(src: &str) -> Result<AbstractTerm> {
        parse_term(src)
    }
}

/// A rational combination of canonical abstract terms of fixed arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractOperator {
    arity: usize,
    terms: BTreeMap<Vec<PFactor>, Rational>,
}

impl AbstractOperator {
    pub fn zero(arity: usize) -> Self {
        AbstractOperator {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(t: &AbstractTerm) -> Self {
        let mut op = Self::zero(t.arity);
        op.add_term(t);
        op
    }

    pub fn from_terms<'a>(arity: usize, ts: impl IntoIterator<Item = &'a AbstractTerm>) -> Result<Self> {
        let mut op = Self::zero(arity);
        for t in ts {
            if t.arity != arity {
                return Err(StarError::ArityMismatch {
                    expected: arity,
                    found: t.arity,
                });
            }
            op.add_term(t);
        }
        Ok(op)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn add_term(&mut self, t: &AbstractTerm) {
        assert_eq!(t.arity, self.arity, "abstract term arity");
        let Some(c) = t.canonical() else { return };
        let slot = self.terms.entry(c.factors.clone()).or_insert_with(Rational::zero);
        *slot += c.coefficient;
        if slot.is_zero() {
            self.terms.remove(&c.factors);
        }
    }

    pub fn add_assign(&mut self, other: &AbstractOperator) {
        for t in other.terms() {
            self.add_term(&t);
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.arity);
        if s.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> Vec<AbstractTerm> {
        self.terms
            .iter()
            .map(|(f, c)| AbstractTerm {
                coefficient: c.clone(),
                arity: self.arity,
                factors: f.clone(),
            })
            .collect()
    }
}

impl fmt::Display for AbstractOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn index_name(n: usize) -> String {
    const LETTERS: &[u8] = b"ijklmnrstuvwabcdefgh";
    if n < LETTERS.len() {
        (LETTERS[n] as char).to_string()
    } else {
        format!("q{n}")
    }
}

impl fmt::Display for AbstractTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lowers: Vec<Vec<String>> = vec![Vec::new(); self.factors.len()];
        let mut args: Vec<Vec<String>> = vec![Vec::new(); self.arity];
        let mut uppers = Vec::with_capacity(self.factors.len());
        for (fi, fac) in self.factors.iter().enumerate() {
            let mut pair = Vec::with_capacity(2);
            for (s, t) in fac.upper.iter().enumerate() {
                let name = index_name(2 * fi + s);
                match t {
                    Target::Factor(g) => lowers[*g].push(name.clone()),
                    Target::Arg(a) => args[*a].push(name.clone()),
                }
                pair.push(name);
            }
            uppers.push(pair);
        }
        let mut parts = Vec::new();
        if self.coefficient != Rational::one() {
            parts.push(display_rational(&self.coefficient));
        }
        for (fi, pair) in uppers.iter().enumerate() {
            if lowers[fi].is_empty() {
                parts.push(format!("P({},{})", pair[0], pair[1]));
            } else {
                parts.push(format!("dP({};{},{})", lowers[fi].join(","), pair[0], pair[1]));
            }
        }
        for (a, names) in args.iter().enumerate() {
            parts.push(format!("@{}({})", a + 1, names.join(",")));
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Parses the text form, e.g. `"dP(r;i,s) dP(s;j,r) @1(i) @2(j)"` for
/// `∂_r P^{is} ∂_s P^{jr} ∂_i f ∂_j g`. An optional leading rational is the
/// coefficient; arguments are numbered from 1 and the arity is the largest
/// argument number mentioned.
pub fn parse_term(src: &str) -> Result<AbstractTerm> {
    let err = |m: String| StarError::Parse(format!("{m} in term {src:?}"));
    let tokens = tokenize(src).map_err(err)?;
    if tokens.is_empty() {
        return Err(err("empty term".into()));
    }
    let mut coefficient = Rational::one();
    let mut rest = tokens.as_slice();
    if let Some(first) = rest.first() {
        if !first.contains('(') {
            coefficient = match first.as_str() {
                "-" => -Rational::one(),
                "+" => Rational::one(),
                s => parse_rational(s)?,
            };
            rest = &rest[1..];
        }
    }
    // name → (upper position, lower target)
    let mut upper_of: HashMap<String, (usize, usize)> = HashMap::new();
    let mut lower_of: HashMap<String, Target> = HashMap::new();
    let mut n_factors = 0usize;
    let mut arity = 0usize;
    for tok in rest {
        let open = tok.find('(').ok_or_else(|| err(format!("expected '(' in {tok:?}")))?;
        if !tok.ends_with(')') {
            return Err(err(format!("expected ')' in {tok:?}")));
        }
        let head = &tok[..open];
        let body = &tok[open + 1..tok.len() - 1];
        let names = |s: &str| -> Vec<String> {
            s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
        };
        let mut record_lower = |name: String, t: Target| -> Result<()> {
            if lower_of.insert(name.clone(), t).is_some() {
                return Err(err(format!("index {name} used twice as a derivative")));
            }
            Ok(())
        };
        match head {
            "P" | "dP" => {
                let (low, up) = match body.split_once(';') {
                    Some((l, u)) => (names(l), names(u)),
                    None if head == "P" => (Vec::new(), names(body)),
                    None => return Err(err(format!("dP needs ';' in {tok:?}"))),
                };
                if up.len() != 2 {
                    return Err(err(format!("P needs two upper indices in {tok:?}")));
                }
                for l in low {
                    record_lower(l, Target::Factor(n_factors))?;
                }
                for (s, u) in up.into_iter().enumerate() {
                    if upper_of.insert(u.clone(), (n_factors, s)).is_some() {
                        return Err(err(format!("index {u} used twice as upper")));
                    }
                }
                n_factors += 1;
            }
            h if h.starts_with('@') => {
                let a: usize = h[1..]
                    .parse()
                    .map_err(|_| err(format!("bad argument number {h:?}")))?;
                if a == 0 {
                    return Err(err("arguments are numbered from 1".into()));
                }
                arity = arity.max(a);
                for l in names(body) {
                    record_lower(l, Target::Arg(a - 1))?;
                }
            }
            _ => return Err(err(format!("unknown token {tok:?}"))),
        }
    }
    let mut factors = vec![PFactor::new(Target::Arg(0), Target::Arg(0)); n_factors];
    for (name, (f, s)) in &upper_of {
        let t = lower_of
            .get(name)
            .ok_or_else(|| err(format!("upper index {name} is never contracted")))?;
        factors[*f].upper[*s] = *t;
    }
    if let Some(name) = lower_of.keys().find(|n| !upper_of.contains_key(*n)) {
        return Err(err(format!("derivative index {name} has no upper partner")));
    }
    AbstractTerm::new(coefficient, arity, factors)
}

fn tokenize(src: &str) -> std::result::Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in src.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced ')'".into());
                }
                cur.push(ch);
                if depth == 0 {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err("unbalanced '('".into());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorJson {
    pub name: String,
    pub derivatives: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbstractTermJson {
    pub coefficient: String,
    pub factors: Vec<FactorJson>,
    pub args: Vec<FactorJson>,
    /// Pairs `[upper endpoint, derivative endpoint]`, e.g. `["P0^1", "@2_0"]`.
    pub wiring: Vec<[String; 2]>,
}

impl AbstractTerm {
    pub fn to_json(&self) -> AbstractTermJson {
        let fd = self.factor_degrees();
        let ad = self.arg_degrees();
        let mut used_f = vec![0usize; self.factors.len()];
        let mut used_a = vec![0usize; self.arity];
        let mut wiring = Vec::new();
        for (fi, fac) in self.factors.iter().enumerate() {
            for (s, t) in fac.upper.iter().enumerate() {
                let lower = match t {
                    Target::Factor(g) => {
                        used_f[*g] += 1;
                        format!("P{g}_{}", used_f[*g] - 1)
                    }
                    Target::Arg(a) => {
                        used_a[*a] += 1;
                        format!("@{}_{}", a + 1, used_a[*a] - 1)
                    }
                };
                wiring.push([format!("P{fi}^{s}"), lower]);
            }
        }
        AbstractTermJson {
            coefficient: format_rational(&self.coefficient),
            factors: fd
                .iter()
                .enumerate()
                .map(|(i, d)| FactorJson {
                    name: format!("P{i}"),
                    derivatives: *d,
                })
                .collect(),
            args: ad
                .iter()
                .enumerate()
                .map(|(i, d)| FactorJson {
                    name: format!("@{}", i + 1),
                    derivatives: *d,
                })
                .collect(),
            wiring,
        }
    }

    pub fn from_json(j: &AbstractTermJson) -> Result<Self> {
        let bad = |m: String| StarError::MalformedTerm(m);
        let fidx: HashMap<&str, usize> = j.factors.iter().enumerate().map(|(i, f)| (f.name.as_str(), i)).collect();
        let aidx: HashMap<&str, usize> = j.args.iter().enumerate().map(|(i, f)| (f.name.as_str(), i)).collect();
        let mut factors = vec![[None, None]; j.factors.len()];
        let mut lower_seen: HashMap<String, ()> = HashMap::new();
        let mut fcount = vec![0usize; j.factors.len()];
        let mut acount = vec![0usize; j.args.len()];
        for [up, low] in &j.wiring {
            let (fname, side) = up
                .split_once('^')
                .ok_or_else(|| bad(format!("upper endpoint {up:?}")))?;
            let f = *fidx.get(fname).ok_or_else(|| bad(format!("unknown factor {fname:?}")))?;
            let s: usize = side.parse().map_err(|_| bad(format!("upper endpoint {up:?}")))?;
            if s > 1 || factors[f][s].is_some() {
                return Err(bad(format!("upper endpoint {up:?} invalid or reused")));
            }
            if lower_seen.insert(low.clone(), ()).is_some() {
                return Err(bad(format!("derivative endpoint {low:?} reused")));
            }
            let (oname, _) = low
                .rsplit_once('_')
                .ok_or_else(|| bad(format!("derivative endpoint {low:?}")))?;
            let t = if let Some(g) = fidx.get(oname) {
                fcount[*g] += 1;
                Target::Factor(*g)
            } else if let Some(a) = aidx.get(oname) {
                acount[*a] += 1;
                Target::Arg(*a)
            } else {
                return Err(bad(format!("unknown endpoint owner {oname:?}")));
            };
            factors[f][s] = Some(t);
        }
        let factors = factors
            .into_iter()
            .map(|[a, b]| match (a, b) {
                (Some(a), Some(b)) => Ok(PFactor::new(a, b)),
                _ => Err(bad("upper index left uncontracted".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, f) in j.factors.iter().enumerate() {
            if f.derivatives != fcount[i] {
                return Err(bad(format!("factor {} declares {} derivatives, wiring has {}", f.name, f.derivatives, fcount[i])));
            }
        }
        for (i, a) in j.args.iter().enumerate() {
            if a.derivatives != acount[i] {
                return Err(bad(format!("argument {} declares {} derivatives, wiring has {}", a.name, a.derivatives, acount[i])));
            }
        }
        AbstractTerm::new(parse_rational(&j.coefficient)?, j.args.len(), factors)
    }
}
