//! Irreducible representations of the supported finite groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Symmetric groups up to this degree get full tables.
const SYM_FULL: u32 = 7;
const MAX_DIHEDRAL_ORDER: u32 = 1 << 20;
const MAX_C2_RANK: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupId {
    /// The dihedral group of the given order `2n`.
    Dihedral(u32),
    Sym(u32),
    Alt5,
    /// `(C_2)^d`.
    ElemAbelian2(u32),
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Dihedral(o) => write!(f, "D{o}"),
            GroupId::Sym(n) => write!(f, "S{n}"),
            GroupId::Alt5 => write!(f, "A5"),
            GroupId::ElemAbelian2(d) => write!(f, "C2^{d}"),
        }
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupId> {
        let bad = || Error::ParseError { line: 0, msg: format!("unknown group `{s}`") };
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let s = s.trim();
        if s.eq_ignore_ascii_case("a5") {
            Ok(GroupId::Alt5)
        } else if let Some(d) = s.strip_prefix("C2^") {
            Ok(GroupId::ElemAbelian2(num(d)?))
        } else if let Some(o) = s.strip_prefix('D') {
            Ok(GroupId::Dihedral(num(o)?))
        } else if let Some(n) = s.strip_prefix('S') {
            Ok(GroupId::Sym(num(n)?))
        } else {
            Err(bad())
        }
    }
}

impl Serialize for GroupId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Order of the determinant character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DetOrder {
    One,
    Two,
    Higher,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Irrep {
    pub name: String,
    pub dim: u64,
    pub self_dual: bool,
    pub det_order: DetOrder,
    /// Schur index 2 over the reals. Recorded only; nothing is computed from it.
    pub symplectic: bool,
}

impl Irrep {
    fn real(name: impl Into<String>, dim: u64, det_order: DetOrder) -> Irrep {
        Irrep { name: name.into(), dim, self_dual: true, det_order, symplectic: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupTable {
    pub id: GroupId,
    #[serde(serialize_with = "biguint_str")]
    pub order: BigUint,
    /// False when only the odd-dimensional count is known.
    pub complete: bool,
    pub irreps: Vec<Irrep>,
    #[serde(serialize_with = "biguint_str")]
    pub odd_dim_count: BigUint,
}

fn biguint_str<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl GroupTable {
    fn from_irreps(id: GroupId, order: BigUint, irreps: Vec<Irrep>) -> GroupTable {
        let odd = irreps.iter().filter(|r| r.dim % 2 == 1).count();
        GroupTable { id, order, complete: true, irreps, odd_dim_count: BigUint::from(odd) }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.name == name)
    }

    /// Multiplicities of the regular representation, that is the dimensions.
    pub fn regular_character(&self) -> super::MultiplicityVector {
        let dims: Vec<u64> = self.irreps.iter().map(|r| r.dim).collect();
        super::MultiplicityVector::exact(self.id, &dims)
    }
}

pub fn group_table(id: GroupId) -> Result<GroupTable> {
    match id {
        GroupId::Dihedral(order) => dihedral(order),
        GroupId::Sym(n) => sym(n),
        GroupId::Alt5 => Ok(GroupTable::from_irreps(
            id,
            BigUint::from(60u32),
            vec![
                Irrep::real("1", 1, DetOrder::One),
                Irrep::real("tau1", 3, DetOrder::One),
                Irrep::real("tau2", 3, DetOrder::One),
                Irrep::real("rho", 4, DetOrder::One),
                Irrep::real("sigma", 5, DetOrder::One),
            ],
        )),
        GroupId::ElemAbelian2(d) => {
            if d == 0 || d > MAX_C2_RANK {
                return Err(Error::UnsupportedGroup(format!("C2^{d}")));
            }
            let irreps = (0u32..1 << d)
                .map(|mask| {
                    let name = if mask == 0 { "1".to_string() } else { format!("chi{mask:0w$b}", w = d as usize) };
                    Irrep::real(name, 1, if mask == 0 { DetOrder::One } else { DetOrder::Two })
                })
                .collect();
            Ok(GroupTable::from_irreps(id, BigUint::one() << d, irreps))
        }
    }
}

fn dihedral(order: u32) -> Result<GroupTable> {
    if order < 4 || order % 2 == 1 || order > MAX_DIHEDRAL_ORDER {
        return Err(Error::UnsupportedGroup(format!("D{order}")));
    }
    let n = order / 2;
    let mut irreps = vec![Irrep::real("1", 1, DetOrder::One), Irrep::real("eps", 1, DetOrder::Two)];
    if n.is_multiple_of(2) {
        irreps.push(Irrep::real("eps1", 1, DetOrder::Two));
        irreps.push(Irrep::real("eps2", 1, DetOrder::Two));
    }
    // rotation by 2 pi k / n, reflections act with determinant -1
    for k in 1..=(n - 1) / 2 {
        irreps.push(Irrep::real(format!("rho{k}"), 2, DetOrder::Two));
    }
    Ok(GroupTable::from_irreps(GroupId::Dihedral(order), BigUint::from(order), irreps))
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Partitions of `n` in decreasing lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn conjugate(lambda: &[u32]) -> Vec<u32> {
    let width = lambda.first().copied().unwrap_or(0);
    (0..width).map(|j| lambda.iter().filter(|&&r| r > j).count() as u32).collect()
}

/// `n! / prod(hook lengths)`.
pub fn sym_irrep_dim(lambda: &[u32]) -> BigUint {
    let n: u32 = lambda.iter().sum();
    let cols = conjugate(lambda);
    let mut hooks = BigUint::one();
    for (i, &row) in lambda.iter().enumerate() {
        for j in 0..row {
            hooks *= row - j + cols[j as usize] - i as u32 - 1;
        }
    }
    factorial(n) / hooks
}

/// The determinant of the irrep `lambda` is the sign character exactly when a
/// transposition has eigenvalue -1 with odd multiplicity, that is when
/// `(dim - chi(tau)) / 2` is odd.
fn sym_det_order(lambda: &[u32], dim: &BigUint) -> DetOrder {
    let n: u32 = lambda.iter().sum();
    if n < 2 {
        return DetOrder::One;
    }
    let c2 = |r: &u32| BigInt::from(*r) * (BigInt::from(*r) - 1) / 2;
    let content: BigInt = lambda.iter().map(c2).sum::<BigInt>() - conjugate(lambda).iter().map(c2).sum::<BigInt>();
    let d = BigInt::from(dim.clone());
    let chi = &d * content / (BigInt::from(n) * (n - 1) / 2);
    let minus_eigs: BigInt = (d - chi) / 2;
    if minus_eigs.bit(0) {
        DetOrder::Two
    } else {
        DetOrder::One
    }
}

fn partition_name(lambda: &[u32]) -> String {
    let parts: Vec<String> = lambda.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn sym(n: u32) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::UnsupportedGroup("S0".into()));
    }
    let id = GroupId::Sym(n);
    if n > SYM_FULL {
        return Ok(GroupTable {
            id,
            order: factorial(n),
            complete: false,
            irreps: Vec::new(),
            odd_dim_count: super::sn_odd_irrep_count(n as u64),
        });
    }
    let irreps = partitions(n)
        .iter()
        .map(|lambda| {
            let dim = sym_irrep_dim(lambda);
            let det = sym_det_order(lambda, &dim);
            Irrep::real(partition_name(lambda), dim.to_u64().expect("small symmetric group"), det)
        })
        .collect();
    Ok(GroupTable::from_irreps(id, factorial(n), irreps))
}
