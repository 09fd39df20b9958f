//! Root numbers of twists by self-dual Artin representations, small group
//! tables, and the rank bounds that follow from multiplicity parities.

mod groups;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Sign};
use crate::error::{Error, Result};
use crate::globalroot::Parity;

pub use groups::{group_table, partitions, sym_irrep_dim, DetOrder, GroupId, GroupTable, Irrep};

/// A self-dual Artin representation as seen by the twisted root number formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDescriptor {
    pub dim: u32,
    pub self_dual: bool,
    /// 1 when `det` is trivial, otherwise the squarefree `a` with `det` cutting out `Q(sqrt a)`.
    pub alpha: i64,
    /// The caller vouches that the conductor is coprime to `N_E`.
    pub coprime_attested: bool,
}

impl RepDescriptor {
    pub fn new(dim: u32, alpha: i64) -> RepDescriptor {
        RepDescriptor { dim, self_dual: true, alpha, coprime_attested: true }
    }

    /// `rho + rho'`: dimensions add and determinants multiply.
    pub fn direct_sum(&self, other: &RepDescriptor) -> Result<RepDescriptor> {
        let alpha = arith::squarefree_part(&(BigInt::from(self.alpha) * other.alpha))?;
        Ok(RepDescriptor {
            dim: self.dim + other.dim,
            self_dual: self.self_dual && other.self_dual,
            alpha: i64::try_from(alpha).map_err(|_| Error::InvalidArgument("alpha overflows i64".into()))?,
            coprime_attested: self.coprime_attested && other.coprime_attested,
        })
    }
}

/// `w(E/Q, rho) = w(E/Q)^dim * sign(alpha) * (alpha / N_E)`.
pub fn artin_twist_root(w_e: Sign, rep: &RepDescriptor, n_e: &BigInt) -> Result<Sign> {
    if !rep.coprime_attested {
        return Err(Error::ConductorClash);
    }
    if !rep.self_dual {
        return Err(Error::NotSelfDual);
    }
    if rep.dim == 0 || n_e <= &BigInt::zero() {
        return Err(Error::InvalidArgument("need dim >= 1 and N_E >= 1".into()));
    }
    let alpha = BigInt::from(rep.alpha);
    if rep.alpha == 0 || !arith::is_squarefree(&alpha)? {
        return Err(Error::NotSquarefree(alpha));
    }
    // 2 | N_E forces 2 unramified in Q(sqrt alpha)
    if !n_e.bit(0) && arith::modp(&alpha, &BigInt::from(4)) != BigInt::one() {
        return Err(Error::ConductorClash);
    }
    let jac = arith::kronecker(&alpha, n_e);
    if jac == 0 {
        return Err(Error::ConductorClash);
    }
    Ok(w_e.pow(rep.dim as u64) * Sign::from_bool_minus(rep.alpha < 0) * Sign::from_bool_minus(jac < 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParityConstraint {
    Even,
    Odd,
    Unknown,
}

impl From<Parity> for ParityConstraint {
    fn from(p: Parity) -> ParityConstraint {
        match p {
            Parity::Even => ParityConstraint::Even,
            Parity::Odd => ParityConstraint::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Exact(u64),
    Parity(ParityConstraint),
}

/// Multiplicities of the irreducible representations of one group, in table order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityVector {
    pub group: GroupId,
    pub entries: Vec<Multiplicity>,
}

impl MultiplicityVector {
    pub fn exact(group: GroupId, counts: &[u64]) -> MultiplicityVector {
        MultiplicityVector { group, entries: counts.iter().map(|&c| Multiplicity::Exact(c)).collect() }
    }

    fn exact_counts(&self) -> Result<Vec<u64>> {
        self.entries
            .iter()
            .map(|m| match m {
                Multiplicity::Exact(c) => Ok(*c),
                Multiplicity::Parity(_) => Err(Error::InvalidArgument("multiplicity known only up to parity".into())),
            })
            .collect()
    }

    /// `sum dim_i * m_i`.
    pub fn weighted_total(&self, table: &GroupTable) -> Result<u64> {
        if table.id != self.group || table.irreps.len() != self.entries.len() {
            return Err(Error::GroupMismatch);
        }
        let counts = self.exact_counts()?;
        Ok(counts.iter().zip(&table.irreps).map(|(c, r)| c * r.dim).sum())
    }
}

/// `rk(E/F^H) = <C[G/H], V>`, the inner product of two multiplicity vectors.
pub fn frobenius_rank(multiplicities: &MultiplicityVector, perm_character: &MultiplicityVector) -> Result<u64> {
    if multiplicities.group != perm_character.group || multiplicities.entries.len() != perm_character.entries.len() {
        return Err(Error::GroupMismatch);
    }
    let a = multiplicities.exact_counts()?;
    let b = perm_character.exact_counts()?;
    Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
}

/// Result of the dihedral parity analysis: forced parities, the least rank they
/// allow, and a multiplicity vector attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DihedralSolution {
    pub parities: MultiplicityVector,
    pub bound: u64,
    pub witness: MultiplicityVector,
}

/// Parities in `V = 1^a + eps^b + rho_1^c + ... + rho_k^c` for a `D_2q`-extension,
/// from `w(E/Q)`, `w(E/Q(sqrt alpha))` and the `w(E/Q, rho_i)`.
pub fn dihedral_parity_solver(q: u32, w_q: Sign, w_quad_subfield: Sign, w_rho: &[Sign]) -> Result<DihedralSolution> {
    if q == 2 || !arith::is_prime(&BigInt::from(q)) {
        return Err(Error::InvalidArgument(format!("q = {q} must be an odd prime")));
    }
    let k = (q as usize - 1) / 2;
    if w_rho.len() != k {
        return Err(Error::InvalidArgument(format!("expected {k} values of w(E, rho_i), got {}", w_rho.len())));
    }
    // the rho_i are Galois conjugate, so they share one multiplicity
    if w_rho.iter().any(|w| *w != w_rho[0]) {
        return Err(Error::InvalidArgument("conjugate representations must have equal root numbers".into()));
    }
    let odd = |w: Sign| u64::from(w.is_minus());
    // w(E/Q(sqrt alpha)) = w(E/Q) w(E/Q, eps)
    let (a, b, c) = (odd(w_q), odd(w_q * w_quad_subfield), odd(w_rho[0]));
    let group = GroupId::Dihedral(2 * q);
    let mut counts = vec![a, b];
    counts.extend(std::iter::repeat_n(c, k));
    let parities = MultiplicityVector {
        group,
        entries: counts
            .iter()
            .map(|&x| Multiplicity::Parity(ParityConstraint::from(Parity::of(x))))
            .collect(),
    };
    let witness = MultiplicityVector::exact(group, &counts);
    let bound = witness.weighted_total(&group_table(group)?)?;
    Ok(DihedralSolution { parities, bound, witness })
}

/// Number of odd-dimensional irreducible representations of `S_n`:
/// `prod_k 2^(k a_k)` for the binary expansion `n = sum a_k 2^k`.
pub fn sn_odd_irrep_count(n: u64) -> BigUint {
    let mut exponent = 0u64;
    for k in 0..64 {
        if n >> k & 1 == 1 {
            exponent += k;
        }
    }
    BigUint::one() << exponent
}

/// `(n / 2)(count - 2)`, the rank lower bound over an `S_n`-extension when `w(E/Q) = -1`.
pub fn sn_rank_bound(n: u64) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    Ok(BigUint::from(n) * (sn_odd_irrep_count(n) - 2u32) / 2u32)
}

/// `floor(k / m)`, with `k` the total dimension of the odd-dimensional irreducible
/// self-dual representations and `m` the number of linear characters of order at most 2.
pub fn order2_bound(odd_self_dual_dims: &[u64], m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if let Some(d) = odd_self_dual_dims.iter().find(|d| *d % 2 == 0) {
        return Err(Error::InvalidArgument(format!("dimension {d} is even")));
    }
    Ok(odd_self_dual_dims.iter().sum::<u64>() / m)
}

/// `order2_bound` read off a group table.
pub fn order2_bound_for(table: &GroupTable) -> Result<u64> {
    if !table.complete {
        return Err(Error::UnsupportedGroup(format!("{} is tabulated by count only", table.id)));
    }
    let dims: Vec<u64> = table.irreps.iter().filter(|r| r.self_dual && r.dim % 2 == 1).map(|r| r.dim).collect();
    let m = table.irreps.iter().filter(|r| r.dim == 1 && r.det_order != DetOrder::Higher).count() as u64;
    order2_bound(&dims, m)
}

/// `rk(E/F) >= n` for a `C_n`-extension `F` of a field satisfying the Heegner hypothesis.
pub fn heegner_bound(n: u64, heegner_attested: bool, coprime_attested: bool) -> Result<u64> {
    if !heegner_attested {
        return Err(Error::AttestationMissing("Heegner hypothesis".into()));
    }
    if !coprime_attested {
        return Err(Error::AttestationMissing("(N_E, Delta_F) = 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(n)
}

/// The twist forced to have root number -1 over `K(sqrt Delta_K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SqrtDiscTwist {
    /// `[K:Q]` even: `w(E/Q, eps (x) rho) = -1`.
    EpsTensorRho,
    /// `[K:Q]` odd: `w(E/Q, rho) w(E/Q, eps) = -1`.
    RhoPlusEps,
}

impl SqrtDiscTwist {
    pub fn name(self) -> &'static str {
        match self {
            SqrtDiscTwist::EpsTensorRho => "eps⊗rho",
            SqrtDiscTwist::RhoPlusEps => "rho⊕eps",
        }
    }
}

pub fn sqrt_disc_growth(degree_parity: Parity, w_q: Sign) -> Result<SqrtDiscTwist> {
    if w_q == Sign::Plus {
        return Err(Error::WrongSign);
    }
    Ok(match degree_parity {
        Parity::Even => SqrtDiscTwist::EpsTensorRho,
        Parity::Odd => SqrtDiscTwist::RhoPlusEps,
    })
}

#[cfg(test)]
mod tests;
