use alloc::vec::Vec;
use core::fmt;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Largest `max(len, max value) + 1` that [`beta_fit`] will take the
/// factorial of.
pub const MAX_FIT_SPAN: u64 = 4096;

/// Parameters of `β(b, c, i) = b mod (1 + (i+1)·c)`, together with the
/// number of leading positions they were fitted to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BetaParams {
    pub b: BigUint,
    pub c: BigUint,
    pub fitted_len: usize,
}

impl BetaParams {
    /// `b mod (1 + (i+1)·c)`. Positions past `fitted_len` extrapolate.
    pub fn eval(&self, i: u64) -> BigUint {
        beta(&self.b, &self.c, i)
    }
}

impl fmt::Display for BetaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} c={} n={}", self.b, self.c, self.fitted_len)
    }
}

pub fn beta(b: &BigUint, c: &BigUint, i: u64) -> BigUint {
    let modulus = BigUint::one() + (BigUint::from(i) + 1u32) * c;
    b % modulus
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BetaError {
    #[error("cannot fit an empty sequence")]
    EmptySequence,
    #[error("sequence span {0} exceeds the fitting limit {MAX_FIT_SPAN}")]
    SpanTooLarge(BigUint),
    #[error("moduli at positions {0} and {1} share a factor")]
    NotCoprime(usize, usize),
    #[error("value at position {0} is not below its modulus")]
    ResidueOutOfRange(usize),
    #[error("fitted parameters disagree with the sequence at position {0}")]
    Inconsistent(usize),
}

fn modulus(c: &BigUint, i: usize) -> BigUint {
    BigUint::one() + BigUint::from(i + 1) * c
}

/// Fits `(b, c)` to `seq` with `c = s!`, `s = max(len, max(seq)) + 1`, and
/// `b` the least solution of `b ≡ seq[i] (mod 1 + (i+1)·c)`.
///
/// The coprimality of the moduli, the residue bounds and the final
/// reproduction of `seq` are all checked; any failure is an error rather than
/// an unfaithful fit.
pub fn beta_fit(seq: &[BigUint]) -> Result<BetaParams, BetaError> {
    let max = seq.iter().max().ok_or(BetaError::EmptySequence)?;
    let span = max.max(&BigUint::from(seq.len())) + 1u32;
    let s = span.to_u64().filter(|&s| s <= MAX_FIT_SPAN).ok_or_else(|| BetaError::SpanTooLarge(span.clone()))?;
    let c: BigUint = (1..=s).map(BigUint::from).product();

    let moduli: Vec<BigUint> = (0..seq.len()).map(|i| modulus(&c, i)).collect();
    for i in 0..moduli.len() {
        if seq[i] >= moduli[i] {
            return Err(BetaError::ResidueOutOfRange(i));
        }
        for j in i + 1..moduli.len() {
            if !moduli[i].gcd(&moduli[j]).is_one() {
                return Err(BetaError::NotCoprime(i, j));
            }
        }
    }

    let b = crt(seq, &moduli).ok_or(BetaError::NotCoprime(0, 0))?;
    let params = BetaParams { b, c, fitted_len: seq.len() };
    if let Some(i) = (0..seq.len()).find(|&i| params.eval(i as u64) != seq[i]) {
        return Err(BetaError::Inconsistent(i));
    }
    Ok(params)
}

/// Least non-negative `x` with `x ≡ residues[i] (mod moduli[i])`, for
/// pairwise coprime moduli. Combines one congruence at a time.
fn crt(residues: &[BigUint], moduli: &[BigUint]) -> Option<BigUint> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, d) in residues.iter().zip(moduli) {
        let (r, d) = (BigInt::from(r.clone()), BigInt::from(d.clone()));
        // x + m·t ≡ r (mod d)  ⇒  t ≡ (r − x)·m⁻¹ (mod d)
        let egcd = m.mod_floor(&d).extended_gcd(&d);
        if !egcd.gcd.is_one() {
            return None;
        }
        let t = ((&r - &x) * egcd.x).mod_floor(&d);
        x += &m * t;
        m *= d;
        x = x.mod_floor(&m);
    }
    x.to_biguint()
}

/// Every `(b, c)` in `0..=bound × 1..=bound` whose β-function reproduces
/// `seq` at positions `0..len`, in lexicographic order.
pub fn beta_enumerate_consistent(seq: &[BigUint], bound: u64) -> Vec<(u64, u64)> {
    // β(b, c, i) ≤ b ≤ bound, so larger targets rule out the whole box.
    let Some(targets) = seq.iter().map(|v| v.to_u64().filter(|&v| v <= bound)).collect::<Option<Vec<u64>>>() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for b in 0..=bound {
        for c in 1..=bound {
            let fits = targets.iter().enumerate().all(|(i, &v)| {
                let d = 1 + (i as u128 + 1) * c as u128;
                (b as u128) % d == v as u128
            });
            if fits {
                out.push((b, c));
            }
        }
    }
    out
}
