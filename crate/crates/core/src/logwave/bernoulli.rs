use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Largest index served by [`bernoulli`].
pub const MAX_BERNOULLI_INDEX: i64 = 32;

// B_0..B_12, B_1 = -1/2 convention.
const TABLE: [(i64, i64); 13] = [
    (1, 1),
    (-1, 2),
    (1, 6),
    (0, 1),
    (-1, 30),
    (0, 1),
    (1, 42),
    (0, 1),
    (-1, 30),
    (0, 1),
    (5, 66),
    (0, 1),
    (-691, 2730),
];

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact Bernoulli number `B_m` for `0 <= m <= 32`.
///
/// Values through `B_12` come from a fixed table; larger indices use
/// `sum_{k=0}^{m} C(m+1, k) B_k = 0`. Odd indices from 3 up are zero.
pub fn bernoulli(m: i64) -> Result<BigRational> {
    if m < 0 {
        return invalid(format!("Bernoulli index must be non-negative, got {m}"));
    }
    if m > MAX_BERNOULLI_INDEX {
        return invalid(format!(
            "Bernoulli index {m} above supported maximum {MAX_BERNOULLI_INDEX}"
        ));
    }
    if m >= 3 && m % 2 == 1 {
        return Ok(BigRational::zero());
    }
    if (m as usize) < TABLE.len() {
        let (n, d) = TABLE[m as usize];
        return Ok(ratio(n, d));
    }
    let mut values: Vec<BigRational> = TABLE.iter().map(|&(n, d)| ratio(n, d)).collect();
    for j in TABLE.len() as i64..=m {
        if j % 2 == 1 {
            values.push(BigRational::zero());
            continue;
        }
        let mut sum = BigRational::zero();
        for (k, b) in values.iter().enumerate() {
            if !b.is_zero() {
                sum += BigRational::from_integer(binomial(j as u64 + 1, k as u64)) * b;
            }
        }
        values.push(-sum / BigRational::from_integer(BigInt::from(j + 1)));
    }
    Ok(values.pop().expect("recurrence produced a value"))
}

pub fn bernoulli_f64(m: i64) -> Result<f64> {
    let b = bernoulli(m)?;
    Ok(b.to_f64().expect("Bernoulli numbers up to B_32 fit in f64"))
}
