//! Exact real-root counting via Sturm chains with rational endpoints.

use crate::error::{CoreError, Result};
use crate::poly::IntPoly;
use crate::Rational;

/// Sturm chain of a squarefree polynomial: `p, p', -rem, ...`, each term a
/// primitive part so coefficients stay small. Sign variations are unchanged
/// by the positive scalings involved.
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> SturmChain {
        let mut chain = Vec::new();
        if p.is_zero() {
            return SturmChain { chain };
        }
        chain.push(p.primitive_signed());
        let d = p.derivative();
        if d.is_zero() {
            return SturmChain { chain };
        }
        chain.push(d.primitive_signed());
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            let (_, rem) = a.pseudo_divrem(b).expect("nonzero divisor");
            if rem.is_zero() {
                break;
            }
            // Pseudo-division scales the true remainder by lc(b)^k: an odd
            // power of a negative leading coefficient flips its sign, so undo
            // that before negating per the Sturm recurrence.
            let k = a.deg() as i64 - b.deg() as i64 + 1;
            let flipped = b.leading().sign() == num_bigint::Sign::Minus && k % 2 == 1;
            let next = if flipped {
                rem.primitive_signed()
            } else {
                rem.primitive_signed().neg()
            };
            chain.push(next);
        }
        SturmChain { chain }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_pos_inf(&self) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at_pos_inf()))
    }

    fn variations_at_neg_inf(&self) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at_neg_inf()))
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0i32;
    let mut count = 0usize;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of real roots of squarefree `p` in the half-open interval `(lo, hi]`.
///
/// Endpoints must not be roots; an endpoint root is reported as an error so
/// the caller can move the endpoint rather than miscount.
pub fn sturm_count(p: &IntPoly, lo: &Rational, hi: &Rational) -> Result<usize> {
    if p.is_zero() || p.is_constant() {
        return Ok(0);
    }
    if !p.is_squarefree() {
        return Err(CoreError::Invalid(
            "sturm_count requires a squarefree polynomial".into(),
        ));
    }
    if lo >= hi {
        return Err(CoreError::EmptyInterval);
    }
    if p.sign_at(lo) == 0 || p.sign_at(hi) == 0 {
        return Err(CoreError::EndpointIsRoot);
    }
    let chain = SturmChain::new(p);
    Ok(chain.variations_at(lo) - chain.variations_at(hi))
}

/// Number of real roots (distinct, since the input must be squarefree) on the
/// whole real line.
pub fn count_all_real_roots(p: &IntPoly) -> Result<usize> {
    if p.is_zero() || p.is_constant() {
        return Ok(0);
    }
    if !p.is_squarefree() {
        return Err(CoreError::Invalid(
            "count_all_real_roots requires a squarefree polynomial".into(),
        ));
    }
    let chain = SturmChain::new(p);
    Ok(chain.variations_at_neg_inf() - chain.variations_at_pos_inf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn quadratic_with_two_real_roots() {
        // y^2 + y - 8: roots (-1 +- sqrt(33))/2, both real
        let p = IntPoly::from_i64s(&[-8, 1, 1]);
        assert_eq!(count_all_real_roots(&p).unwrap(), 2);
        assert_eq!(sturm_count(&p, &rat(0), &rat(3)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &rat(-10), &rat(10)).unwrap(), 2);
    }

    #[test]
    fn no_real_roots() {
        let p = IntPoly::from_i64s(&[5, 0, 1]); // x^2 + 5
        assert_eq!(count_all_real_roots(&p).unwrap(), 0);
    }

    #[test]
    fn endpoints_must_be_root_free() {
        // roots of x^2 - 4 at +-2
        let p = IntPoly::from_i64s(&[-4, 0, 1]);
        assert_eq!(sturm_count(&p, &rat(0), &rat(3)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &rat(-3), &rat(3)).unwrap(), 2);
        assert_eq!(sturm_count(&p, &rat(-1), &rat(1)).unwrap(), 0);
        // an endpoint root is an error, not a silent miscount
        assert_eq!(
            sturm_count(&p, &rat(2), &rat(3)),
            Err(CoreError::EndpointIsRoot)
        );
        assert_eq!(
            sturm_count(&p, &rat(0), &rat(2)),
            Err(CoreError::EndpointIsRoot)
        );
    }

    #[test]
    fn degree_five() {
        // x(x^2-1)(x^2-4) = x^5 - 5x^3 + 4x
        let p = IntPoly::from_i64s(&[0, 4, 0, -5, 0, 1]);
        assert_eq!(count_all_real_roots(&p).unwrap(), 5);
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(sturm_count(&p, &half, &rat(5)).unwrap(), 2);
        assert_eq!(sturm_count(&p, &rat(-5), &rat(5)).unwrap(), 5);
    }
}
