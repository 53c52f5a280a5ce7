//! Full-powerset reference engines: the naive zeta/Möbius transforms, the
//! recursive Möbius function and the Fast Möbius Transform.
//!
//! Everything here touches all `2^N` subsets and is gated by a frame-size or
//! memory cap. These routines are the oracles and baselines for the focal
//! point engine in [`crate::focal`].

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::FrameOfDiscernment;
use crate::mask::SubsetMask;
use crate::order::OrderDirection;
use crate::par;
use crate::set_function::{Role, SetFunction};

/// Largest frame the naive engines accept.
pub const NAIVE_MAX_N: usize = 20;

/// Largest frame the FMT accepts regardless of the memory cap.
pub const FMT_MAX_N: usize = 30;

/// Default cap on the dense array used by the FMT (64 MiB, i.e. `N ≤ 23`).
pub const DEFAULT_MEM_CAP_BYTES: u64 = 64 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Zeta,
    Mobius,
}

fn check_naive(n: usize) -> Result<()> {
    if n > NAIVE_MAX_N {
        return Err(Error::FrameTooLarge {
            n,
            limit: NAIVE_MAX_N,
        });
    }
    Ok(())
}

/// Length of the dense array for a frame of `n` elements, if it fits under `cap_bytes`.
pub fn dense_len(n: usize, cap_bytes: u64) -> Result<usize> {
    if n > FMT_MAX_N {
        return Err(Error::FrameTooLarge {
            n,
            limit: FMT_MAX_N,
        });
    }
    let len = 1usize << n;
    let required = (len as u128) * std::mem::size_of::<f64>() as u128;
    if required > cap_bytes as u128 {
        return Err(Error::MemoryCap {
            required,
            cap: cap_bytes,
        });
    }
    Ok(len)
}

/// Dense image of `f`, indexed by mask value.
pub fn to_dense<M: SubsetMask>(f: &SetFunction<M>, cap_bytes: u64) -> Result<Vec<f64>> {
    let len = dense_len(f.frame().len(), cap_bytes)?;
    let mut out = vec![f.neutral(); len];
    for (k, v) in f.iter() {
        out[k.to_index().expect("mask within dense range")] = v;
    }
    Ok(out)
}

pub fn from_dense<M: SubsetMask>(
    frame: Arc<FrameOfDiscernment>,
    role: Role,
    values: &[f64],
) -> SetFunction<M> {
    SetFunction::from_unique(
        frame,
        role,
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| (M::from_index(i), v)),
    )
}

/// Möbius function of the sub-poset `(domain, d)` by the recursion
/// `μ(x,x) = 1`, `μ(x,y) = −Σ_{x<z≤y} μ(z,y)`.
///
/// The column `μ(·, y)` is memoized for the duration of the call.
pub fn mobius_function_naive<M: SubsetMask>(
    x: M,
    y: M,
    domain: &[M],
    d: OrderDirection,
) -> Result<i64> {
    if !d.leq(x, y) {
        return Err(Error::NotComparable);
    }
    if !domain.contains(&x) || !domain.contains(&y) {
        return Err(Error::NotInSet);
    }
    let column = mobius_column(y, domain, d);
    Ok(column[&x])
}

/// `μ(z, y)` for every `z ≤ y` of `domain`.
pub fn mobius_column<M: SubsetMask>(
    y: M,
    domain: &[M],
    d: OrderDirection,
) -> HashMap<M, i64> {
    let n = M::CAPACITY;
    let mut below: Vec<M> = domain.iter().copied().filter(|&z| d.leq(z, y)).collect();
    below.sort_unstable();
    below.dedup();
    // From y downwards: every z is visited after all of (z, y].
    below.sort_by(|a, b| d.rank(*b, n).cmp(&d.rank(*a, n)).then(a.cmp(b)));
    let mut mu: HashMap<M, i64> = HashMap::with_capacity(below.len());
    for (i, &z) in below.iter().enumerate() {
        let value = if z == y {
            1
        } else {
            -below[..i]
                .iter()
                .filter(|&&w| d.lt(z, w))
                .map(|w| mu[w])
                .sum::<i64>()
        };
        mu.insert(z, value);
    }
    mu
}

/// Zeta transform over the full powerset, summing (or multiplying) over the
/// support only. Returns the full image as a set function.
pub fn zeta_naive<M: SubsetMask>(f: &SetFunction<M>, d: OrderDirection) -> Result<SetFunction<M>> {
    let n = f.frame().len();
    check_naive(n)?;
    let role = f.role();
    let support = f.entries();
    let values = par::map_range(1usize << n, |i| {
        let y = M::from_index(i);
        support
            .iter()
            .filter(|&&(x, _)| d.leq(x, y))
            .fold(role.neutral(), |acc, &(_, v)| role.combine(acc, v))
    });
    Ok(from_dense(f.frame().clone(), role, &values))
}

/// Möbius inversion `f(y) = Σ_{x≤y} g(x)·μ(x,y)` over the full powerset,
/// with μ obtained from the recursive definition (never the closed form).
/// Multiplicative functions use `Π g(x)^μ(x,y)`.
pub fn mobius_naive<M: SubsetMask>(g: &SetFunction<M>, d: OrderDirection) -> Result<SetFunction<M>> {
    let n = g.frame().len();
    check_naive(n)?;
    let len = 1usize << n;
    let full = len - 1;
    let role = g.role();
    // The superset order on masks is the subset order on complements.
    let to_subset = |i: usize| match d {
        OrderDirection::Subset => i,
        OrderDirection::Superset => full ^ i,
    };
    let mut dense = vec![role.neutral(); len];
    for (k, v) in g.iter() {
        dense[to_subset(k.to_index().expect("dense"))] = v;
    }
    let transformed = par::map_range_init(
        len,
        || vec![0i64; len],
        |mu, y| {
            let mut z = y;
            mu[y] = 1;
            // Submasks of y in descending numeric order: every strict
            // superset of z inside y is settled before z.
            while z != 0 {
                z = (z - 1) & y;
                let free = y ^ z;
                let mut acc = 0i64;
                let mut t = free;
                while t != 0 {
                    acc += mu[z | t];
                    t = (t - 1) & free;
                }
                mu[z] = -acc;
            }
            let mut out = role.neutral();
            let mut x = y;
            loop {
                let coeff = mu[x];
                out = match role {
                    Role::Additive => out + dense[x] * coeff as f64,
                    Role::Multiplicative => out * dense[x].powi(coeff as i32),
                };
                if x == 0 {
                    break;
                }
                x = (x - 1) & y;
            }
            out
        },
    );
    let mut values = vec![0.0; len];
    for (i, v) in transformed.into_iter().enumerate() {
        values[to_subset(i)] = v;
    }
    Ok(from_dense(g.frame().clone(), role, &values))
}

/// In-place Fast Möbius Transform: `N` butterfly passes over a dense array
/// of length `2^N` indexed by mask value.
pub fn fmt(values: &mut [f64], transform: Transform, d: OrderDirection, role: Role) {
    assert!(
        values.len().is_power_of_two(),
        "FMT input length must be a power of two"
    );
    let n = values.len().trailing_zeros();
    for bit in 0..n {
        let half = 1usize << bit;
        match (d, transform, role) {
            (OrderDirection::Subset, Transform::Zeta, Role::Additive) => {
                par::butterfly(values, half, |lo, hi| *hi += *lo)
            }
            (OrderDirection::Subset, Transform::Mobius, Role::Additive) => {
                par::butterfly(values, half, |lo, hi| *hi -= *lo)
            }
            (OrderDirection::Superset, Transform::Zeta, Role::Additive) => {
                par::butterfly(values, half, |lo, hi| *lo += *hi)
            }
            (OrderDirection::Superset, Transform::Mobius, Role::Additive) => {
                par::butterfly(values, half, |lo, hi| *lo -= *hi)
            }
            (OrderDirection::Subset, Transform::Zeta, Role::Multiplicative) => {
                par::butterfly(values, half, |lo, hi| *hi *= *lo)
            }
            (OrderDirection::Subset, Transform::Mobius, Role::Multiplicative) => {
                par::butterfly(values, half, |lo, hi| *hi /= *lo)
            }
            (OrderDirection::Superset, Transform::Zeta, Role::Multiplicative) => {
                par::butterfly(values, half, |lo, hi| *lo *= *hi)
            }
            (OrderDirection::Superset, Transform::Mobius, Role::Multiplicative) => {
                par::butterfly(values, half, |lo, hi| *lo /= *hi)
            }
        }
    }
}

/// FMT over a sparse input, with the dense array bounded by `cap_bytes`.
pub fn fmt_set_function<M: SubsetMask>(
    f: &SetFunction<M>,
    transform: Transform,
    d: OrderDirection,
    cap_bytes: u64,
) -> Result<SetFunction<M>> {
    let mut dense = to_dense(f, cap_bytes)?;
    fmt(&mut dense, transform, d, f.role());
    Ok(from_dense(f.frame().clone(), f.role(), &dense))
}
