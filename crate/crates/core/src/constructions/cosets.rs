//! Coset representatives for `S = <g^stride>` modulo `T = <g^((q-1)/m)>`.
//!
//! `g^{stride*i}` and `g^{stride*j}` share a coset of `T` exactly when
//! `stride*(i-j)*m = 0 (mod q-1)`, so the residue `stride*i*m mod (q-1)` is a
//! complete coset key and no field arithmetic is needed.

use std::collections::HashSet;

use super::ConstructionError;
use crate::ff::numtheory::gcd;
use crate::ff::FieldCtx;

/// Constraint on the chosen indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Any,
    /// Sum of the indices is even.
    SumEven,
    /// Sum of the indices is odd.
    SumOdd,
    /// Every index is even.
    AllEven,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSelection {
    pub indices: Vec<u64>,
    pub sum: u64,
}

struct CosetSpace {
    qm1: u64,
    stride: u64,
    m: u64,
    /// Order of `g^stride`; indices range over `0..order`.
    order: u64,
}

impl CosetSpace {
    fn key(&self, i: u64) -> u64 {
        ((self.stride as u128 * i as u128 % self.qm1 as u128) * self.m as u128 % self.qm1 as u128)
            as u64
    }
}

fn wants(parity: Parity, sum: u64) -> bool {
    match parity {
        Parity::SumEven => sum % 2 == 0,
        Parity::SumOdd => sum % 2 == 1,
        Parity::Any | Parity::AllEven => true,
    }
}

/// Greedy ascending selection of `t` indices in pairwise distinct cosets.
///
/// For sum-parity constraints the first `t-1` greedy indices are kept and the
/// last one is scanned upward until the parity matches; if that runs dry a
/// single replacement of an earlier index is tried before giving up.
pub fn select_coset_reps(
    ctx: &FieldCtx,
    stride: u64,
    m: u64,
    t: u64,
    parity: Parity,
) -> Result<CosetSelection, ConstructionError> {
    let qm1 = ctx.order() - 1;
    let space = CosetSpace {
        qm1,
        stride: stride % qm1,
        m,
        order: qm1 / gcd(qm1, stride % qm1),
    };
    let step = if parity == Parity::AllEven { 2 } else { 1 };
    let candidates = || (0..space.order).step_by(step);

    let mut available = HashSet::new();
    for i in candidates() {
        available.insert(space.key(i));
    }
    if (available.len() as u64) < t {
        return Err(ConstructionError::NotEnoughCosets {
            wanted: t,
            available: available.len() as u64,
        });
    }
    if t == 0 {
        return Ok(CosetSelection {
            indices: vec![],
            sum: 0,
        });
    }

    let mut chosen = Vec::with_capacity(t as usize);
    let mut keys = HashSet::new();
    for i in candidates() {
        if chosen.len() as u64 == t - 1 {
            break;
        }
        if keys.insert(space.key(i)) {
            chosen.push(i);
        }
    }
    let base_sum: u64 = chosen.iter().sum();
    let start = chosen.last().map_or(0, |&x| x + step as u64);
    let last = (start..space.order)
        .step_by(step)
        .find(|&i| !keys.contains(&space.key(i)) && wants(parity, base_sum + i));
    if let Some(i) = last {
        chosen.push(i);
        let sum = base_sum + i;
        return Ok(CosetSelection {
            indices: chosen,
            sum,
        });
    }

    // Fallback: full greedy set, then flip the parity with one substitution.
    let mut full = chosen.clone();
    let tail = (start..space.order)
        .step_by(step)
        .find(|&i| !keys.contains(&space.key(i)))
        .expect("enough cosets were counted above");
    full.push(tail);
    for pos in (0..full.len()).rev() {
        let others: HashSet<u64> = full
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != pos)
            .map(|(_, &x)| space.key(x))
            .collect();
        let old = full[pos];
        let sum_without: u64 = full.iter().sum::<u64>() - old;
        let replacement = candidates().find(|&x| {
            x % 2 != old % 2
                && !full.contains(&x)
                && !others.contains(&space.key(x))
                && wants(parity, sum_without + x)
        });
        if let Some(x) = replacement {
            full[pos] = x;
            full.sort_unstable();
            let sum = full.iter().sum();
            return Ok(CosetSelection { indices: full, sum });
        }
    }
    Err(ConstructionError::ParityInfeasible { t, m })
}
