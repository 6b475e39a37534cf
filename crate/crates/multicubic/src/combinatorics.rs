//! Node-set enumeration for the multi-cubic equation and the exact binomial
//! weight identities behind its collapsed forms.

use num_bigint::BigInt;
use num_integer::binomial;

use crate::error::{Error, Result};

/// Per-coordinate choice inside a node tuple. Ordered `First < PlusDiff <
/// MinusDiff`; enumeration is lexicographic under this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeChoice {
    /// x1j
    First,
    /// x1j + x2j
    PlusDiff,
    /// x1j - x2j
    MinusDiff,
}

impl NodeChoice {
    pub fn symbol(self) -> char {
        match self {
            NodeChoice::First => 'F',
            NodeChoice::PlusDiff => 'P',
            NodeChoice::MinusDiff => 'M',
        }
    }

    pub fn from_symbol(c: char) -> Result<NodeChoice> {
        match c {
            'F' => Ok(NodeChoice::First),
            'P' => Ok(NodeChoice::PlusDiff),
            'M' => Ok(NodeChoice::MinusDiff),
            other => Err(Error::parse("node choice", format!("unknown symbol {other:?}"))),
        }
    }
}

/// One summand of M_k^n: a tuple of n choices with exactly `fix_count`
/// coordinates fixed at x1j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MkTerm {
    pub choices: Vec<NodeChoice>,
    pub fix_count: usize,
}

impl MkTerm {
    pub fn new(choices: Vec<NodeChoice>) -> Self {
        let fix_count = choices.iter().filter(|c| **c == NodeChoice::First).count();
        MkTerm { choices, fix_count }
    }

    /// String form over the alphabet {F, P, M}, e.g. "FPM".
    pub fn encode(&self) -> String {
        self.choices.iter().map(|c| c.symbol()).collect()
    }

    pub fn decode(s: &str) -> Result<MkTerm> {
        let choices = s
            .chars()
            .map(NodeChoice::from_symbol)
            .collect::<Result<Vec<_>>>()?;
        if choices.is_empty() {
            return Err(Error::parse("node term", "empty term string"));
        }
        Ok(MkTerm::new(choices))
    }
}

/// A sign tuple q in {-1,1}^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    pub signs: Vec<i8>,
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if k > n {
        return Err(Error::domain(format!("k = {k} out of range 0..={n}")));
    }
    Ok(())
}

/// All terms of M_k^n in lexicographic order; length binom(n,k) * 2^(n-k).
pub fn enumerate_mk(n: usize, k: usize) -> Result<Vec<MkTerm>> {
    check_range(n, k)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    fill_mk(n, k, &mut prefix, &mut out);
    Ok(out)
}

fn fill_mk(n: usize, k: usize, prefix: &mut Vec<NodeChoice>, out: &mut Vec<MkTerm>) {
    let used = prefix.iter().filter(|c| **c == NodeChoice::First).count();
    let remaining = n - prefix.len();
    if remaining == 0 {
        out.push(MkTerm::new(prefix.clone()));
        return;
    }
    for choice in [NodeChoice::First, NodeChoice::PlusDiff, NodeChoice::MinusDiff] {
        let used_next = used + usize::from(choice == NodeChoice::First);
        // prune branches that cannot reach exactly k First entries
        if used_next > k || used_next + (remaining - 1) < k {
            continue;
        }
        prefix.push(choice);
        fill_mk(n, k, prefix, out);
        prefix.pop();
    }
}

/// All 2^n sign patterns, +1 before -1, lexicographic from the left.
pub fn enumerate_sign_patterns(n: usize) -> Result<Vec<SignPattern>> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let signs = (0..n)
            .map(|j| if mask >> (n - 1 - j) & 1 == 0 { 1 } else { -1 })
            .collect();
        out.push(SignPattern { signs });
    }
    Ok(out)
}

pub fn big_pow(base: u32, e: u32) -> BigInt {
    BigInt::from(base).pow(e)
}

/// The weight 2^(n-k) * 12^k attached to f(M_k^n).
pub fn rhs_weight(n: usize, k: usize) -> Result<BigInt> {
    check_range(n, k)?;
    Ok(big_pow(2, (n - k) as u32) * big_pow(12, k as u32))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub computed: BigInt,
    pub expected: BigInt,
    pub equal: bool,
}

impl IdentityCheck {
    fn new(computed: BigInt, expected: BigInt) -> Self {
        let equal = computed == expected;
        IdentityCheck {
            computed,
            expected,
            equal,
        }
    }
}

/// Sum_k binom(n,k) 2^(2(n-k)) 12^k against its closed form 2^(4n).
pub fn identity_total_weight(n: usize) -> Result<IdentityCheck> {
    check_range(n, 0)?;
    let mut computed = BigInt::ZERO;
    for k in 0..=n {
        computed += binomial(BigInt::from(n), BigInt::from(k))
            * big_pow(2, 2 * (n - k) as u32)
            * big_pow(12, k as u32);
    }
    Ok(IdentityCheck::new(computed, big_pow(2, 4 * n as u32)))
}

/// 2^(2n-1) + Sum_{k=1}^{n-1} binom(n-1,k) 2^(2(n-k)-1) 12^k against 2^(4n-3).
pub fn identity_w2(n: usize) -> Result<IdentityCheck> {
    check_range(n, 0)?;
    let mut computed = big_pow(2, 2 * n as u32 - 1);
    for k in 1..n {
        computed += binomial(BigInt::from(n - 1), BigInt::from(k))
            * big_pow(2, (2 * (n - k) - 1) as u32)
            * big_pow(12, k as u32);
    }
    Ok(IdentityCheck::new(computed, big_pow(2, 4 * n as u32 - 3)))
}

/// 12^n + Sum_{k=1}^{n-1} binom(n-1,k-1) 2^(2(n-k)) 12^k against 12 * 2^(4(n-1)).
pub fn identity_w1(n: usize) -> Result<IdentityCheck> {
    check_range(n, 0)?;
    let mut computed = big_pow(12, n as u32);
    for k in 1..n {
        computed += binomial(BigInt::from(n - 1), BigInt::from(k - 1))
            * big_pow(2, 2 * (n - k) as u32)
            * big_pow(12, k as u32);
    }
    Ok(IdentityCheck::new(
        computed,
        BigInt::from(12) * big_pow(2, 4 * (n as u32 - 1)),
    ))
}

pub fn binom_big(n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::ZERO
    } else {
        binomial(BigInt::from(n), BigInt::from(k))
    }
}

/// binom(n,k) * 2^(n-k), the cardinality of M_k^n.
pub fn mk_cardinality(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::ZERO;
    }
    binom_big(n, k) * big_pow(2, (n - k) as u32)
}
