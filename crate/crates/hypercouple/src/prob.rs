//! Exact rational probabilities and exact Bernoulli coins.
//!
//! All probabilities in this crate are `BigRational` end to end; floating
//! point appears only in reports and in the schedule formulas, which round
//! back to bounded-denominator rationals before entering the exact engine.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Parses "3/4", "0.85", "1", "1e-3"-free decimal strings into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        let neg = int_part.starts_with('-');
        let int: BigInt = int_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?;
        if frac_part.is_empty() {
            return Ok(Rat::from_integer(int));
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal in {s:?}")));
        }
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(frac, scale);
        let int = Rat::from_integer(int);
        return Ok(if neg { int - frac } else { int + frac });
    }
    let int: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rat::from_integer(int))
}

/// Parses a probability, enforcing 0 <= p <= 1.
pub fn parse_probability(s: &str) -> Result<Rat> {
    let r = parse_rational(s)?;
    if r.is_negative() || r > Rat::one() {
        return Err(Error::Parse(format!("probability {s:?} outside [0,1]")));
    }
    Ok(r)
}

/// r^k for small k.
pub fn rat_pow(r: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

/// Renders a rational as "num/den" (or "num" when integral).
pub fn format_rational(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via continued-fraction convergents plus the final semiconvergent.
pub fn approx_rational(x: f64, max_den: u64) -> Result<Rat> {
    if !x.is_finite() {
        return Err(Error::OutOfRange(format!("cannot approximate {x}")));
    }
    if max_den == 0 {
        return Err(Error::OutOfRange("max_den must be positive".into()));
    }
    let neg = x < 0.0;
    let xa = x.abs();
    let (mut p0, mut q0) = (1i128, 0i128);
    let (mut p1, mut q1) = (xa.floor() as i128, 1i128);
    let mut frac = xa - xa.floor();
    while frac > 1e-15 {
        let inv = 1.0 / frac;
        if inv > 1e17 {
            break;
        }
        let a = inv.floor() as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den as i128 {
            // Largest semiconvergent still within the denominator bound;
            // take it only when it beats the last convergent.
            let k = (max_den as i128 - q0) / q1;
            if k > 0 {
                let (ps, qs) = (k * p1 + p0, k * q1 + q0);
                let c1 = (p1 as f64 / q1 as f64 - xa).abs();
                let c2 = (ps as f64 / qs as f64 - xa).abs();
                if c2 < c1 {
                    p1 = ps;
                    q1 = qs;
                }
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        frac = inv - inv.floor();
    }
    let mut r = Rat::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Draws an exact Bernoulli(p) using rejection sampling over 256-bit
/// uniforms, so the coin has no rounding bias for any rational p.
pub fn bernoulli(rng: &mut impl RngCore, p: &Rat) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.is_one() {
        return true;
    }
    debug_assert!(p.is_positive() && *p < Rat::one());
    let num = p.numer().magnitude();
    let den = p.denom().magnitude();
    let two_256 = BigUint::from(1u8) << 256;
    // K = floor(2^256 / den); accept draws below den*K, so that
    // floor(draw / K) is exactly uniform on 0..den.
    let k = &two_256 / den;
    let bound = den * &k;
    loop {
        let mut bytes = [0u8; 32];
        rng.fill_bytes(&mut bytes);
        let draw = BigUint::from_bytes_le(&bytes);
        if draw < bound {
            return &draw / &k < *num;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("0.85").unwrap(), rat(17, 20));
        assert_eq!(parse_rational("1").unwrap(), rat(1, 1));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_probability("1.5").is_err());
    }

    #[test]
    fn approximates_with_bounded_denominator() {
        let r = approx_rational(std::f64::consts::PI, 1_000_000).unwrap();
        assert!(*r.denom() <= BigInt::from(1_000_000));
        let err = (rat_to_f64(&r) - std::f64::consts::PI).abs();
        assert!(err < 1e-9, "pi approx error {err}");
        assert_eq!(approx_rational(0.5, 1_000_000).unwrap(), rat(1, 2));
    }

    #[test]
    fn exact_coin_is_unbiased_at_desk_scale() {
        let p = rat(1, 40);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 200_000u32;
        let mut hits = 0u32;
        for _ in 0..trials {
            if bernoulli(&mut rng, &p) {
                hits += 1;
            }
        }
        let mean = trials as f64 / 40.0;
        let sigma = (trials as f64 * (1.0 / 40.0) * (39.0 / 40.0)).sqrt();
        assert!(
            (hits as f64 - mean).abs() < 5.0 * sigma,
            "hits={hits} mean={mean} sigma={sigma}"
        );
        assert!(!bernoulli(&mut rng, &rat(0, 1)));
        assert!(bernoulli(&mut rng, &rat(1, 1)));
    }
}
