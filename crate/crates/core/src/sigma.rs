//! The admissible-parameter set `Sigma_r` for `r` projections summing to a
//! scalar, and the Coxeter map on that scalar.
//!
//! `Sigma_r` for `r >= 4` consists of the discrete series
//! `Lambda_1 = {rho_r(2k)}`, `Lambda_2 = {rho_r(2k+1)}`, the closed band
//! `[(r - sqrt(r^2-4r))/2, (r + sqrt(r^2-4r))/2]`, and the reflections
//! `r - Lambda_1`, `r - Lambda_2`.

use serde::Serialize;
use thiserror::Error;

use crate::numeric::Scalar;
use crate::rho::{rho_table, RecurrenceSequence, RhoError, A_SEQUENCE_PHI_OFFSET};

/// Default absolute tolerance for membership queries.
pub const DEFAULT_MEMBER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SigmaError {
    #[error("parameter r = {0} must be at least 4")]
    BelowFour(String),
    #[error("iterate index k must be positive")]
    ZeroIterate,
    #[error("Coxeter map has a pole at k = {k} for this alpha")]
    Pole { k: u64 },
    #[error(transparent)]
    Rho(#[from] RhoError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaDescription<T> {
    pub r: T,
    /// `rho_r(2k)` for `0 <= k <= k_max`
    pub lambda1: Vec<T>,
    /// `rho_r(2k + 1)` for `0 <= k <= k_max`
    pub lambda2: Vec<T>,
    pub band: (f64, f64),
    pub reflected1: Vec<T>,
    pub reflected2: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "part", content = "k")]
pub enum SigmaPart {
    Lambda1(usize),
    Lambda2(usize),
    Band,
    Reflected1(usize),
    Reflected2(usize),
}

fn ensure_at_least_four<T: Scalar>(r: &T) -> Result<(), SigmaError> {
    if *r >= T::from_count(4) {
        Ok(())
    } else {
        Err(SigmaError::BelowFour(r.to_string()))
    }
}

pub fn sigma_description<T: Scalar>(
    r: &T,
    k_max: usize,
) -> Result<SigmaDescription<T>, SigmaError> {
    ensure_at_least_four(r)?;
    let table = rho_table(r, 2 * k_max as u64 + 1)?;
    let finite: Vec<T> = table
        .into_iter()
        .map(|v| v.into_finite().expect("no poles for r >= 4"))
        .collect();
    let lambda1: Vec<T> = finite.iter().step_by(2).cloned().collect();
    let lambda2: Vec<T> = finite.iter().skip(1).step_by(2).cloned().collect();
    let reflect = |xs: &[T]| xs.iter().map(|x| r.clone() - x.clone()).collect::<Vec<_>>();
    let rf = r.as_f64();
    let root = (rf * rf - 4.0 * rf).max(0.0).sqrt();
    Ok(SigmaDescription {
        r: r.clone(),
        reflected1: reflect(&lambda1),
        reflected2: reflect(&lambda2),
        lambda1,
        lambda2,
        band: ((rf - root) / 2.0, (rf + root) / 2.0),
    })
}

impl<T: Scalar> SigmaDescription<T> {
    /// Every listed part containing `alpha` within `tol`. Discrete series are
    /// only searched up to the computed `k_max`.
    pub fn locate(&self, alpha: f64, tol: f64) -> Vec<SigmaPart> {
        let near = |x: &T| (x.as_f64() - alpha).abs() <= tol;
        let mut parts = Vec::new();
        parts.extend(self.lambda1.iter().position(near).map(SigmaPart::Lambda1));
        parts.extend(self.lambda2.iter().position(near).map(SigmaPart::Lambda2));
        if alpha >= self.band.0 - tol && alpha <= self.band.1 + tol {
            parts.push(SigmaPart::Band);
        }
        parts.extend(
            self.reflected1
                .iter()
                .position(near)
                .map(SigmaPart::Reflected1),
        );
        parts.extend(
            self.reflected2
                .iter()
                .position(near)
                .map(SigmaPart::Reflected2),
        );
        parts
    }
}

/// `Phi^{+k}(alpha) = (r - rho_r(2k-1) alpha) / (r - rho_r(2k-1) - alpha)`.
pub fn phi_plus<T: Scalar>(r: &T, alpha: &T, k: u64) -> Result<T, SigmaError> {
    ensure_at_least_four(r)?;
    if k == 0 {
        return Err(SigmaError::ZeroIterate);
    }
    let rho = crate::rho::rho(r, 2 * k - 1)?
        .into_finite()
        .expect("no poles for r >= 4");
    let denom = r.clone() - rho.clone() - alpha.clone();
    if denom.is_negligible() {
        return Err(SigmaError::Pole { k });
    }
    Ok((r.clone() - rho * alpha.clone()) / denom)
}

/// `Phi^{+k}(alpha)` as `1 + a_{k-1} / a_k` in the convention of
/// [`A_SEQUENCE_PHI_OFFSET`].
pub fn phi_plus_recurrent<T: Scalar>(r: &T, alpha: &T, k: u64) -> Result<T, SigmaError> {
    ensure_at_least_four(r)?;
    if k == 0 {
        return Err(SigmaError::ZeroIterate);
    }
    let a = RecurrenceSequence::a(r.clone(), alpha.clone())?;
    let num = a.term(k - 1 + A_SEQUENCE_PHI_OFFSET)?;
    let den = a.term(k + A_SEQUENCE_PHI_OFFSET)?;
    if den.is_negligible() {
        return Err(SigmaError::Pole { k });
    }
    Ok(T::one() + num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sigma_prefixes_for_five() {
        let s = sigma_description(&q(5, 1), 4).unwrap();
        assert_eq!(s.lambda1[0], q(0, 1));
        // 1 + 1/(r-1)
        assert_eq!(s.lambda1[1], q(1, 1) + q(1, 4));
        assert_eq!(s.lambda2[0], q(1, 1));
        // 1 + 1/(r-2)
        assert_eq!(s.lambda2[1], q(1, 1) + q(1, 3));
        // 1 + 1/((r-2) - 1/(r-1))
        assert_eq!(s.lambda1[2], q(1, 1) + q(1, 1) / (q(3, 1) - q(1, 4)));
        for (a, b) in s.lambda1.iter().zip(&s.reflected1) {
            assert_eq!(a + b, q(5, 1));
        }
    }

    #[test]
    fn band_degenerates_at_four() {
        let s = sigma_description(&4.0_f64, 3).unwrap();
        assert_eq!(s.band, (2.0, 2.0));
        assert!(sigma_description(&3.5_f64, 3).is_err());
    }

    #[test]
    fn series_increase_below_band() {
        for r in [q(9, 2), q(5, 1), q(6, 1), q(10, 1)] {
            let s = sigma_description(&r, 30).unwrap();
            for series in [&s.lambda1, &s.lambda2] {
                for w in series.windows(2) {
                    assert!(w[0] < w[1], "r={r}");
                }
                // x < (r - sqrt(r^2 - 4r)) / 2  iff  2x < r and x^2 - r x + r > 0
                let x = series.last().unwrap();
                assert!(q(2, 1) * x < r && x * x - &r * x + &r > q(0, 1));
            }
        }
    }

    #[test]
    fn locate_parts() {
        let s = sigma_description(&5.0_f64, 10).unwrap();
        assert_eq!(s.locate(1.25, 1e-9), vec![SigmaPart::Lambda1(1)]);
        assert_eq!(
            s.locate(5.0 - 4.0 / 3.0, 1e-9),
            vec![SigmaPart::Reflected2(1)]
        );
        assert_eq!(s.locate(2.5, 1e-9), vec![SigmaPart::Band]);
        assert!(s.locate(-1.0, 1e-9).is_empty());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_plus(&q(4, 1), &q(0, 1), 1).unwrap(), q(4, 3));
        assert_eq!(phi_plus(&q(5, 1), &q(1, 1), 2).unwrap(), q(11, 8));
        let (r, alpha) = (q(7, 1), q(3, 2));
        assert_eq!(
            phi_plus(&r, &alpha, 1).unwrap(),
            (&r - &alpha) / (&r - q(1, 1) - &alpha)
        );
        // k = 1 pole at alpha = r - 1
        assert!(matches!(
            phi_plus(&q(5, 1), &q(4, 1), 1),
            Err(SigmaError::Pole { k: 1 })
        ));
        assert!(matches!(
            phi_plus(&q(5, 1), &q(1, 1), 0),
            Err(SigmaError::ZeroIterate)
        ));
        assert!(matches!(
            phi_plus(&q(3, 1), &q(1, 1), 1),
            Err(SigmaError::BelowFour(_))
        ));
    }

    #[test]
    fn recurrent_form_with_offset() {
        assert_eq!(phi_plus_recurrent(&q(4, 1), &q(0, 1), 1).unwrap(), q(4, 3));
        assert_eq!(phi_plus_recurrent(&q(4, 1), &q(0, 1), 2).unwrap(), q(8, 5));
        let closed = phi_plus(&6.0_f64, &2.0, 3).unwrap();
        let rec = phi_plus_recurrent(&6.0_f64, &2.0, 3).unwrap();
        assert!((closed - rec).abs() <= 1e-12 * closed.abs());
        assert!(matches!(
            phi_plus_recurrent(&q(5, 1), &q(4, 1), 1),
            Err(SigmaError::Pole { k: 1 })
        ));
    }
}
