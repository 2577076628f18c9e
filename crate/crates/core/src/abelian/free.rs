//! Elements acting freely on a free extension.

use num_integer::Integer;
use num_traits::Zero;

use super::constructions::free_extension;
use super::sft::AbelianNnSft;
use crate::error::{Error, Result};
use crate::periods::{closed_walk, count_periodic_points, shortest_cycle};
use crate::tileset::prune_essential;
use crate::z2::{period_vector_graph, periodize, PeriodVector, TorusConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreeCheck {
    /// `gⁿ` lies in `Free(X)`, so no configuration of the extension is fixed by `g`.
    Free { power: u64 },
    /// A configuration of the extension fixed by `g`.
    NotFree { witness: TorusConfig },
    Unknown { bound: u64 },
}

/// Decides whether `g ∈ ℤᵈ` fixes no configuration of the free extension of
/// the ℤᵏ-SFT `x`, for `(k,d)` in `{(1,1), (1,2), (2,2)}`.
///
/// Looks for `n ≤ bound` with `n·g ∈ ℤᵏ ∩ Free(X)`; otherwise builds a
/// configuration fixed by `g`, constant along the cosets it does not touch.
pub fn free_elements_check(x: &AbelianNnSft, g: &[i64], bound: u64) -> Result<FreeCheck> {
    let k = x.group().dim();
    let d = g.len();
    if !x.group().is_free() || !matches!((k, d), (1, 1) | (1, 2) | (2, 2)) {
        return Err(Error::Unsupported(format!("free-element check for {} inside Z^{d}", x.group())));
    }
    let check = if k == 1 { check_line(x, g, bound)? } else { check_plane(x, g)? };
    if let FreeCheck::NotFree { witness } = &check {
        let up = free_extension(x, 2)?;
        assert!(up.valid_on_torus(witness)?, "free-element witness violates the extension");
        assert!(witness.fixed_by(g[0], g.get(1).copied().unwrap_or(0)), "witness is not fixed by g");
    }
    Ok(check)
}

fn check_line(x: &AbelianNnSft, g: &[i64], bound: u64) -> Result<FreeCheck> {
    let (graph, letter_of) = x.to_tileset_graph_with_letters()?;
    let pruned = prune_essential(&graph);
    if pruned.is_empty() {
        // nothing to fix
        return Ok(FreeCheck::Free { power: 1 });
    }
    let c = g.get(1).copied().unwrap_or(0);
    for n in 1..=bound {
        let h = g[0] * n as i64;
        if c == 0 && h != 0 {
            let table = count_periodic_points(&pruned, h.unsigned_abs())?;
            if table.get(h.unsigned_abs()).is_zero() {
                return Ok(FreeCheck::Free { power: n });
            }
        }
    }
    let letter = |v: usize| {
        let label = &pruned.alphabet()[v];
        letter_of[graph.index_of(label).expect("pruned vertex")]
    };
    let row: Vec<usize> = if c == 0 && g[0] != 0 {
        match closed_walk(&pruned, g[0].unsigned_abs() as usize) {
            Some(w) => w.into_iter().map(letter).collect(),
            None => return Ok(FreeCheck::Unknown { bound }),
        }
    } else {
        shortest_cycle(&pruned).expect("non-empty essential graph").into_iter().map(letter).collect()
    };
    let p = row.len();
    if c == 0 {
        let witness = TorusConfig::from_fn(p, 1, |i, _| row[i])?;
        return Ok(FreeCheck::NotFree { witness });
    }
    // y(i,j) = row(i − h·⌊j/c⌋) is fixed by (h,c) = ±g
    let (h, c) = if c < 0 { (-g[0], -c) } else { (g[0], c) };
    let t = p / p.gcd(&(h.unsigned_abs() as usize));
    let c = c as usize;
    let witness = TorusConfig::from_fn(p, c * t, |i, j| {
        let shift = h * (j / c) as i64;
        row[(i as i64 - shift).rem_euclid(p as i64) as usize]
    })?;
    Ok(FreeCheck::NotFree { witness })
}

fn check_plane(x: &AbelianNnSft, g: &[i64]) -> Result<FreeCheck> {
    let sft = x.to_nn2()?;
    let v = PeriodVector::new(g[0], g[1]).map_err(|_| Error::Unsupported("g = 0 fixes every configuration".into()))?;
    if prune_essential(&period_vector_graph(&sft, v)).is_empty() {
        return Ok(FreeCheck::Free { power: 1 });
    }
    let witness = periodize(&sft, v).expect("non-empty reduction periodizes");
    Ok(FreeCheck::NotFree { witness })
}
