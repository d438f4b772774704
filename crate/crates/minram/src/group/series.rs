//! Lower central series, generator ranks, exponents and centers, computed on
//! the full enumeration of a pc-group.
//!
//! G_(i+1) = [G_i, G] is obtained as the normal closure of the commutators
//! [x, g] over all x in G_i and group generators g; d(G_i/G_(i+1)) is read
//! off as log_l of the index of G_(i+1) (G_i)^l in G_i (Burnside basis), and
//! the cyclic structure of each quotient from element-order counts.

use serde::{Deserialize, Serialize};

use super::pcgroup::{Elt, Enumeration, PcGroup, ENUMERATION_LIMIT};
use crate::{Error, Result};

/// Lower-central-series data for one l-group.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesReport {
    /// |G_1|, |G_2|, ..., ending with 1.
    pub lcs_orders: Vec<u64>,
    /// d(G_i/G_(i+1)) for i = 1..c.
    pub quotient_ranks: Vec<u32>,
    /// Nilpotency class (0 for the trivial group).
    pub class_c: usize,
    /// Minimal number of generators.
    pub d: u32,
    /// Exponent of the group (a power of l).
    pub exponent: u64,
    /// Invariant factors of G_i/G_(i+1), ascending, for i = 1..c.
    pub kernel_invariants: Vec<Vec<u64>>,
}

/// Subgroup closure of a generating set, as sorted element indices.
fn closure(g: &PcGroup, en: &Enumeration, gens: &[usize]) -> Vec<usize> {
    let id = en.idx(&g.identity());
    let mut in_set = vec![false; en.len()];
    in_set[id] = true;
    let mut members = vec![id];
    let mut work = vec![id];
    while let Some(h) = work.pop() {
        for &s in gens {
            let prod = en.idx(&g.mul(&en.elements[h], &en.elements[s]));
            if !in_set[prod] {
                in_set[prod] = true;
                members.push(prod);
                work.push(prod);
            }
        }
    }
    members.sort_unstable();
    members
}

/// Normal closure of a generating set under conjugation by the group
/// generators.
fn normal_closure(g: &PcGroup, en: &Enumeration, seed: &[usize]) -> Vec<usize> {
    let mut gens: Vec<usize> = seed.to_vec();
    gens.sort_unstable();
    gens.dedup();
    loop {
        let sub = closure(g, en, &gens);
        let mut grew = false;
        let in_sub: Vec<bool> = {
            let mut v = vec![false; en.len()];
            for &i in &sub {
                v[i] = true;
            }
            v
        };
        'outer: for &h in &sub {
            for gi in 0..g.num_gens() {
                let gen_elt = g.generator(gi);
                let conj = g.mul(&g.mul(&g.inverse(&gen_elt), &en.elements[h]), &gen_elt);
                let idx = en.idx(&conj);
                if !in_sub[idx] {
                    gens.push(idx);
                    grew = true;
                    break 'outer;
                }
            }
        }
        if !grew {
            return sub;
        }
    }
}

/// Full series computation; restricted to groups whose order fits the
/// enumeration limit (3^8).
pub fn series_report(g: &PcGroup) -> Result<SeriesReport> {
    if g.order() > ENUMERATION_LIMIT {
        return Err(Error::Domain(format!(
            "series computation needs full enumeration; order {} exceeds {}",
            g.order(),
            ENUMERATION_LIMIT
        )));
    }
    let en = g.enumerate()?;
    let l = g.prime();
    let all: Vec<usize> = (0..en.len()).collect();

    // Lower central series as index sets.
    let mut series: Vec<Vec<usize>> = vec![all];
    loop {
        let current = series.last().unwrap();
        if current.len() == 1 {
            break;
        }
        // commutators [x, g] for x in G_i and g the group generators
        let mut comms: Vec<usize> = Vec::new();
        for &x in current {
            for gi in 0..g.num_gens() {
                let c = g.commutator(&en.elements[x], &g.generator(gi));
                comms.push(en.idx(&c));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        let next = normal_closure(g, &en, &comms);
        if next.len() == current.len() {
            // cannot happen for nilpotent groups unless already trivial
            return Err(Error::Presentation(
                "lower central series failed to descend (group not nilpotent?)".into(),
            ));
        }
        series.push(next);
        if series.last().unwrap().len() == 1 {
            break;
        }
    }
    if series.last().unwrap().len() != 1 {
        series.push(vec![en.idx(&g.identity())]);
    }

    let lcs_orders: Vec<u64> = series.iter().map(|s| s.len() as u64).collect();
    let class_c = series.len() - 1;

    // d(G_i/G_(i+1)) and invariant factors per layer.
    let mut quotient_ranks = Vec::new();
    let mut kernel_invariants = Vec::new();
    for i in 0..class_c {
        let gi = &series[i];
        let gnext = &series[i + 1];
        let inv = quotient_invariants(g, &en, gi, gnext, l);
        quotient_ranks.push(inv.len() as u32);
        kernel_invariants.push(inv);
    }

    // d(G) = log_l [G : G_2 G^l] (Burnside basis theorem).
    let d = if class_c == 0 {
        0
    } else {
        quotient_ranks[0]
    };

    // exponent: max element order, each found by an l-power ladder.
    let mut exponent = 1u64;
    for e in &en.elements {
        exponent = exponent.max(g.element_order(e));
    }

    Ok(SeriesReport {
        lcs_orders,
        quotient_ranks,
        class_c,
        d,
        exponent,
        kernel_invariants,
    })
}

/// Invariant factors of the abelian quotient G_i/G_(i+1), ascending, from
/// counts of elements killed by successive l-powers.
fn quotient_invariants(
    g: &PcGroup,
    en: &Enumeration,
    gi: &[usize],
    gnext: &[usize],
    l: u64,
) -> Vec<u64> {
    let quotient_order = (gi.len() / gnext.len()) as u64;
    if quotient_order == 1 {
        return vec![];
    }
    let in_next: Vec<bool> = {
        let mut v = vec![false; en.len()];
        for &i in gnext {
            v[i] = true;
        }
        v
    };
    // counts[k] = |{x in G_i : x^(l^k) in G_(i+1)}| / |G_(i+1)|
    let mut counts: Vec<u64> = vec![1];
    let mut k = 0u32;
    loop {
        k += 1;
        let lk = l.pow(k);
        let count = gi
            .iter()
            .filter(|&&x| in_next[en.idx(&g.pow(&en.elements[x], lk))])
            .count() as u64
            / gnext.len() as u64;
        counts.push(count);
        if count == quotient_order {
            break;
        }
    }
    // conjugate partition: r_k = #(factors with exponent >= k)
    let mut exps: Vec<u32> = Vec::new();
    for k in 1..counts.len() {
        let ratio = counts[k] / counts[k - 1];
        let mut r = 0u32;
        let mut v = ratio;
        while v > 1 {
            debug_assert_eq!(v % l, 0);
            v /= l;
            r += 1;
        }
        for j in 0..r as usize {
            if exps.len() <= j {
                exps.push(0);
            }
            exps[j] = k as u32;
        }
    }
    let mut factors: Vec<u64> = exps.iter().map(|&e| l.pow(e)).collect();
    factors.sort_unstable();
    factors
}

/// The center of the group, as sorted element indices.
pub fn center(g: &PcGroup, en: &Enumeration) -> Vec<usize> {
    let gens: Vec<Elt> = (0..g.num_gens()).map(|i| g.generator(i)).collect();
    (0..en.len())
        .filter(|&i| {
            let x = &en.elements[i];
            gens.iter().all(|gen| g.mul(x, gen) == g.mul(gen, x))
        })
        .collect()
}
