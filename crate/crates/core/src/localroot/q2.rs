//! The Q_2 root-number table, stored as data and evaluated on 2-adic invariants.
//!
//! Each row of `data/q2_table.txt` gives a pattern on the reduced triple
//! `(CD, C6, C4)`, a congruence condition on the odd parts of `c4`, `c6` and the
//! discriminant, and the resulting sign.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{val_int, Sign, Valuation};
use crate::curve::{integral_model, WeierstrassModel};
use crate::error::{Error, Result};

pub(crate) const TABLE_SOURCE: &str = include_str!("data/q2_table.txt");

/// Residues are kept modulo `2^RES_BITS`; every modulus in the table divides it.
const RES_BITS: u32 = 16;
const RES_MASK: i64 = (1 << RES_BITS) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CTriple {
    pub cd: Valuation,
    pub c6: Valuation,
    pub c4: Valuation,
}

impl std::fmt::Display for CTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.cd, self.c6, self.c4)
    }
}

/// Everything the table conditions can refer to, with residues mod `2^16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoAdicData {
    pub triple: CTriple,
    c4: Option<i64>,
    c6: Option<i64>,
    disc: i64,
}

fn reduce_triple(vd: i64, v6: Option<i64>, v4: Option<i64>) -> CTriple {
    let fl = |v: Option<i64>, k: i64| v.map_or(i64::MAX, |v| v.div_euclid(k));
    let m = (vd / 12).min(fl(v6, 6)).min(fl(v4, 4));
    let sub = |v: Option<i64>, k: i64| v.map_or(Valuation::Infinity, |v| Valuation::Finite(v - k * m));
    CTriple { cd: Valuation::Finite(vd - 12 * m), c6: sub(v6, 6), c4: sub(v4, 4) }
}

fn odd_part_big(x: &BigInt) -> (i64, i64) {
    let v = val_int(x, &BigInt::from(2));
    let u: BigInt = x >> v;
    let r = (u & BigInt::from(RES_MASK)).to_i64().unwrap();
    (v as i64, r)
}

fn odd_part_i128(x: i128) -> (i64, i64) {
    let v = x.trailing_zeros();
    ((v as i64), ((x >> v) as i64) & RES_MASK)
}

impl TwoAdicData {
    /// From integral invariants of any model (not necessarily minimal).
    pub fn from_invariants(c4: &BigInt, c6: &BigInt, disc: &BigInt) -> Result<TwoAdicData> {
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let (vd, d) = odd_part_big(disc);
        let p4 = (!c4.is_zero()).then(|| odd_part_big(c4));
        let p6 = (!c6.is_zero()).then(|| odd_part_big(c6));
        Ok(TwoAdicData {
            triple: reduce_triple(vd, p6.map(|p| p.0), p4.map(|p| p.0)),
            c4: p4.map(|p| p.1),
            c6: p6.map(|p| p.1),
            disc: d,
        })
    }

    /// Machine-integer path for sweeps; same result as [`TwoAdicData::from_invariants`].
    pub fn from_i128(c4: i128, c6: i128, disc: i128) -> Result<TwoAdicData> {
        if disc == 0 {
            return Err(Error::SingularCurve);
        }
        let (vd, d) = odd_part_i128(disc);
        let p4 = (c4 != 0).then(|| odd_part_i128(c4));
        let p6 = (c6 != 0).then(|| odd_part_i128(c6));
        Ok(TwoAdicData {
            triple: reduce_triple(vd, p6.map(|p| p.0), p4.map(|p| p.0)),
            c4: p4.map(|p| p.1),
            c6: p6.map(|p| p.1),
            disc: d,
        })
    }

    /// `c6 / 2^(v(c6) - C6 + e)` as a residue, i.e. `c6' * 2^(C6 - e)`.
    fn c6_e(&self, e: i64) -> Option<i64> {
        let (Some(u), Valuation::Finite(c6)) = (self.c6, self.triple.c6) else {
            return Some(0);
        };
        let k = c6 - e;
        if k < 0 {
            return None;
        }
        if k >= RES_BITS as i64 {
            return Some(0);
        }
        Some((u << k) & RES_MASK)
    }

    fn var(&self, v: Var) -> std::result::Result<i64, &'static str> {
        let fin = |x: Valuation| x.finite().ok_or("an infinite triple entry");
        match v {
            Var::C4 => self.c4.ok_or("c4' with c4 = 0"),
            Var::C6 => self.c6.ok_or("c6' with c6 = 0"),
            Var::Disc => Ok(self.disc),
            Var::C6e(e) => self.c6_e(e).ok_or("c6,e with C6 < e"),
            Var::CD => fin(self.triple.cd),
            Var::CC6 => fin(self.triple.c6),
            Var::CC4 => fin(self.triple.c4),
        }
    }

    pub(crate) fn c6_odd(&self) -> Option<i64> {
        self.c6
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    C4,
    C6,
    Disc,
    C6e(i64),
    CD,
    CC6,
    CC4,
}

/// A sum of monomials `coeff * x1 * x2 * ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Expr(Vec<(i64, Vec<Var>)>);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Cond {
    Or(Vec<Cond>),
    And(Vec<Cond>),
    /// `lhs` congruent (or, with `negate`, congruent to none of) `rhs` modulo `modulus`.
    Congr { lhs: Expr, rhs: Vec<Expr>, modulus: i64, negate: bool },
    /// An exact comparison of a triple entry, e.g. `C6 == 4`.
    Level { var: Var, value: i64, negate: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pat {
    Exact(i64),
    AtLeast(i64),
}

impl Pat {
    fn matches(self, v: Valuation) -> bool {
        match (self, v) {
            (Pat::Exact(n), Valuation::Finite(x)) => x == n,
            (Pat::Exact(_), Valuation::Infinity) => false,
            (Pat::AtLeast(n), Valuation::Finite(x)) => x >= n,
            (Pat::AtLeast(_), Valuation::Infinity) => true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Q2Row {
    /// 1-based line number in the asset.
    pub line: usize,
    pub source: String,
    pub sign: Sign,
    pattern: [Pat; 3],
    cond: Cond,
}

impl Q2Row {
    pub fn matches_triple(&self, t: &CTriple) -> bool {
        self.pattern[0].matches(t.cd) && self.pattern[1].matches(t.c6) && self.pattern[2].matches(t.c4)
    }

    pub fn evaluate(&self, data: &TwoAdicData) -> Result<bool> {
        if !self.matches_triple(&data.triple) {
            return Ok(false);
        }
        eval_cond(&self.cond, data).map_err(|what| {
            Error::TableUndefined(format!("line {}: {what} (triple {})", self.line, data.triple))
        })
    }
}

fn eval_expr(e: &Expr, d: &TwoAdicData) -> std::result::Result<i64, &'static str> {
    let mut acc = 0i64;
    for (c, vars) in &e.0 {
        let mut t = *c;
        for &v in vars {
            t = t.wrapping_mul(d.var(v)?) & RES_MASK;
        }
        acc = (acc + t) & RES_MASK;
    }
    Ok(acc)
}

fn eval_cond(c: &Cond, d: &TwoAdicData) -> std::result::Result<bool, &'static str> {
    match c {
        Cond::Or(v) => {
            for x in v {
                if eval_cond(x, d)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Cond::And(v) => {
            for x in v {
                if !eval_cond(x, d)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Cond::Congr { lhs, rhs, modulus, negate } => {
            let l = eval_expr(lhs, d)?.rem_euclid(*modulus);
            let mut hit = false;
            for r in rhs {
                hit |= eval_expr(r, d)?.rem_euclid(*modulus) == l;
            }
            Ok(hit != *negate)
        }
        Cond::Level { var, value, negate } => {
            let t = d.triple;
            let entry = match var {
                Var::CD => t.cd,
                Var::CC6 => t.c6,
                _ => t.c4,
            };
            Ok((entry == Valuation::Finite(*value)) != *negate)
        }
    }
}

// ---- parsing ----

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Comma,
    Eq,
    Ne,
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '=' | '!' if cs.get(i + 1) == Some(&'=') => {
                out.push(if c == '=' { Tok::Eq } else { Tok::Ne });
                i += 2;
            }
            _ if c.is_ascii_digit() => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let n: String = cs[st..i].iter().collect();
                out.push(Tok::Num(n.parse().map_err(|_| format!("bad number {n}"))?));
            }
            _ if c.is_ascii_alphabetic() => {
                let st = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[st..i].iter().collect()));
            }
            _ => return Err(format!("unexpected character {c:?}")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> std::result::Result<Cond, String> {
        let mut parts = vec![self.and()?];
        while self.keyword("or") {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Cond::Or(parts) })
    }

    fn and(&mut self) -> std::result::Result<Cond, String> {
        let mut parts = vec![self.atom()?];
        while self.keyword("and") {
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Cond::And(parts) })
    }

    fn atom(&mut self) -> std::result::Result<Cond, String> {
        let lhs = self.expr()?;
        let negate = match self.next() {
            Some(Tok::Eq) => false,
            Some(Tok::Ne) => true,
            t => return Err(format!("expected == or !=, found {t:?}")),
        };
        let mut rhs = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            rhs.push(self.expr()?);
        }
        if self.keyword("mod") {
            match self.next() {
                Some(Tok::Num(m)) if m > 0 && m <= 1 << RES_BITS && (m as u64).is_power_of_two() => {
                    Ok(Cond::Congr { lhs, rhs, modulus: m, negate })
                }
                t => Err(format!("bad modulus {t:?}")),
            }
        } else {
            // Triple comparisons: `C6 == 4`.
            let level = matches!(lhs.0.as_slice(), [(1, v)] if v.len() == 1 && matches!(v[0], Var::CD | Var::CC6 | Var::CC4));
            match (level, rhs.as_slice()) {
                (true, [Expr(r)]) if r.len() == 1 && r[0].1.is_empty() => {
                    Ok(Cond::Level { var: lhs.0[0].1[0], value: r[0].0, negate })
                }
                _ => Err("congruence without modulus".into()),
            }
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, String> {
        let mut terms = Vec::new();
        let mut sign = 1;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let (c, vars) = self.term()?;
            terms.push((sign * c, vars));
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(Expr(terms))
    }

    fn term(&mut self) -> std::result::Result<(i64, Vec<Var>), String> {
        let mut coeff = 1i64;
        let mut vars = Vec::new();
        loop {
            match self.next() {
                Some(Tok::Num(n)) => coeff *= n,
                Some(Tok::Ident(s)) => vars.push(parse_var(&s)?),
                t => return Err(format!("expected a factor, found {t:?}")),
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                return Ok((coeff, vars));
            }
        }
    }
}

fn parse_var(s: &str) -> std::result::Result<Var, String> {
    Ok(match s {
        "c4" => Var::C4,
        "c6" => Var::C6,
        "d" => Var::Disc,
        "CD" => Var::CD,
        "C6" => Var::CC6,
        "C4" => Var::CC4,
        _ => match s.strip_prefix("c6_").and_then(|e| e.parse::<i64>().ok()) {
            Some(e) => Var::C6e(e),
            None => return Err(format!("unknown quantity {s}")),
        },
    })
}

fn parse_pat(s: &str) -> std::result::Result<Pat, String> {
    let (ge, n) = match s.strip_prefix(">=") {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let n: i64 = n.parse().map_err(|_| format!("bad pattern entry {s}"))?;
    Ok(if ge { Pat::AtLeast(n) } else { Pat::Exact(n) })
}

fn parse_row(line: usize, text: &str) -> Result<Q2Row> {
    let err = |msg: String| Error::ParseError { line, msg };
    let cols: Vec<&str> = text.split('|').map(str::trim).collect();
    let [pat, cond, sign] = cols.as_slice() else {
        return Err(err("expected three |-separated columns".into()));
    };
    let pats: Vec<Pat> = pat.split_whitespace().map(parse_pat).collect::<std::result::Result<_, _>>().map_err(err)?;
    let pattern: [Pat; 3] = pats.try_into().map_err(|_| err("pattern needs three entries".into()))?;
    let mut p = Parser { toks: tokenize(cond).map_err(err)?, pos: 0 };
    let cond = p.or().map_err(err)?;
    if p.pos != p.toks.len() {
        return Err(err("trailing tokens in condition".into()));
    }
    let sign = match *sign {
        "+1" => Sign::Plus,
        "-1" => Sign::Minus,
        s => return Err(err(format!("bad sign {s}"))),
    };
    Ok(Q2Row { line, source: text.to_string(), sign, pattern, cond })
}

pub(crate) fn parse_table(src: &str) -> Result<Vec<Q2Row>> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_row(i + 1, l))
        .collect()
}

/// The parsed table, in asset order.
pub fn q2_table() -> &'static [Q2Row] {
    static TABLE: OnceLock<Vec<Q2Row>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(TABLE_SOURCE).expect("embedded Q_2 table parses"))
}

/// Indices of every row whose pattern and condition hold.
pub fn q2_matches(data: &TwoAdicData) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, row) in q2_table().iter().enumerate() {
        if row.evaluate(data)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Root number from the first matching row.
pub fn lookup_q2(data: &TwoAdicData) -> Result<Sign> {
    for row in q2_table() {
        if row.evaluate(data)? {
            return Ok(row.sign);
        }
    }
    Err(Error::TableMiss { triple: data.triple.to_string() })
}

pub(crate) fn two_adic_data(model: &WeierstrassModel) -> Result<TwoAdicData> {
    model.invariants()?;
    let im = integral_model(model);
    let inv = im.invariants()?;
    TwoAdicData::from_invariants(&inv.c4.to_integer(), &inv.c6.to_integer(), &inv.disc.to_integer())
}

/// The reduced triple of the given model (made integral by a `u = 1/D` scaling if needed).
pub fn c_triple(model: &WeierstrassModel) -> Result<CTriple> {
    Ok(two_adic_data(model)?.triple)
}

/// `w(E/Q_2)` by the table; valid on non-minimal models.
pub fn root_number_2(model: &WeierstrassModel) -> Result<Sign> {
    lookup_q2(&two_adic_data(model)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    fn m(a: [i64; 5]) -> WeierstrassModel {
        WeierstrassModel::from_ints(a).unwrap()
    }

    #[test]
    fn asset_checksum() {
        let digest = hex::encode(Sha256::digest(TABLE_SOURCE.as_bytes()));
        assert_eq!(digest, "35fa87cc02c5a73ed209361e5799a4a6ab906627992c2fd0eaba312d6ba50a53");
    }

    #[test]
    fn table_has_eighty_rows() {
        assert_eq!(q2_table().len(), 80);
    }

    #[test]
    fn triples() {
        let f = Valuation::Finite;
        let t = c_triple(&m([0, 0, 0, -64, -128])).unwrap();
        assert_eq!(t, CTriple { cd: f(6), c6: f(6), c4: f(6) });
        let t = c_triple(&m([0, 0, 0, -1, 0])).unwrap();
        assert_eq!(t, CTriple { cd: f(6), c6: Valuation::Infinity, c4: f(4) });
        let t = c_triple(&m([0, 0, 0, -25, 0])).unwrap();
        assert_eq!(t, CTriple { cd: f(6), c6: Valuation::Infinity, c4: f(4) });
    }

    #[test]
    fn vectors() {
        assert_eq!(root_number_2(&m([0, 0, 0, -64, -128])).unwrap(), Sign::Minus);
        assert_eq!(root_number_2(&m([0, 0, 0, -1, 0])).unwrap(), Sign::Minus);
        assert_eq!(root_number_2(&m([0, 0, 0, -25, 0])).unwrap(), Sign::Plus);
    }

    #[test]
    fn c6_e_values() {
        // c6 = 2^5 * 3 with C6 = 5: c6,4 = 6, c6,7 undefined
        let d = TwoAdicData::from_i128(4 * 5, 96, 3).unwrap();
        assert_eq!(d.c6_e(4), Some(6));
        assert_eq!(d.c6_e(7), None);
        let z = TwoAdicData::from_i128(16 * 3, 0, 64).unwrap();
        assert_eq!(z.c6_e(7), Some(0));
    }

    #[test]
    fn i128_path_matches_bigint_path() {
        for (c4, c6, d) in [(48i128, 0i128, 64i128), (3072, 110592, 9699328), (-5, 7, -11), (0, 864, -432)] {
            let a = TwoAdicData::from_i128(c4, c6, d).unwrap();
            let b = TwoAdicData::from_invariants(&BigInt::from(c4), &BigInt::from(c6), &BigInt::from(d)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn parser_rejects_malformed_rows() {
        assert!(parse_table("0 0 | c6 == 1 mod 4 | +1").is_err());
        assert!(parse_table("0 0 0 | c6 == 1 | +1").is_err());
        assert!(parse_table("0 0 0 | c6 == 1 mod 3 | +1").is_err());
        assert!(parse_table("0 0 0 | c7 == 1 mod 4 | +1").is_err());
        assert!(parse_table("0 0 0 | c6 == 1 mod 4 | 0").is_err());
        assert!(parse_table("0 0 0 | c6 == 1 mod 4 and | +1").is_err());
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let rows = parse_table("0 0 0 | c4 == 1 mod 4 and c6 == 1 mod 4 or c4 == 3 mod 4 | +1").unwrap();
        let Cond::Or(parts) = &rows[0].cond else { panic!("expected a disjunction") };
        assert_eq!(parts.len(), 2);
        assert!(matches!(parts[0], Cond::And(_)));
    }

    #[test]
    fn overlapping_patterns_are_disjoint_on_residues() {
        // Enumerate odd residues of c4', c6', disc' mod 64 over every triple the table mentions.
        let table = q2_table();
        let mut triples = Vec::new();
        for cd in 0..12i64 {
            for c6 in (0..10).map(Valuation::Finite).chain([Valuation::Infinity]) {
                for c4 in (0..8).map(Valuation::Finite).chain([Valuation::Infinity]) {
                    triples.push(CTriple { cd: Valuation::Finite(cd), c6, c4 });
                }
            }
        }
        for t in triples {
            let rows: Vec<&Q2Row> = table.iter().filter(|r| r.matches_triple(&t)).collect();
            if rows.len() < 2 {
                continue;
            }
            for c4 in (1..64).step_by(2) {
                for c6 in (1..64).step_by(2) {
                    for d in (1..8).step_by(2) {
                        let data = TwoAdicData {
                            triple: t,
                            c4: (!t.c4.is_infinite()).then_some(c4),
                            c6: (!t.c6.is_infinite()).then_some(c6),
                            disc: d,
                        };
                        let hits: Vec<usize> =
                            rows.iter().filter(|r| r.evaluate(&data).unwrap_or(false)).map(|r| r.line).collect();
                        assert!(hits.len() <= 1, "triple {t}: rows {hits:?} overlap at c4'={c4} c6'={c6} d'={d}");
                    }
                }
            }
        }
    }
}
