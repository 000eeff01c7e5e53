use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::matching::Matching;

/// `a_i` adjacent to `b_j` for every `j ≥ i`. Its only perfect matching is
/// `a_i–b_i`.
pub fn semi_complete(c: usize) -> Result<BipartiteGraph> {
    if c == 0 {
        return Err(Error::InvalidParameter("semi-complete graphs need c >= 1".into()));
    }
    let edges: Vec<(usize, usize)> = (1..=c).flat_map(|i| (i..=c).map(move |j| (i, j))).collect();
    BipartiteGraph::new(c, c, &edges)
}

fn check_z(z: usize) -> Result<()> {
    if z < 4 || !z.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("H_z needs an even z >= 4, got {z}")));
    }
    Ok(())
}

/// The anti-Ranking gadget on `u_1..u_z` (A side) and `v_1..v_z` (B side).
///
/// For `i ≤ z/2`, `u_i` sees `v_{2i-1}, v_{2i}, v_{2i+1}`; the last index
/// falls off the end for `i = z/2` and is dropped. For `i > z/2`, `u_i` sees
/// only `v_{2i-z-1}`. Ranking with increasing ranks matches `z/2`, with
/// decreasing ranks `z/2 + 1`, while a perfect matching exists.
pub fn h_gadget(z: usize) -> Result<BipartiteGraph> {
    check_z(z)?;
    let half = z / 2;
    let mut edges = Vec::with_capacity(2 * z);
    for i in 1..=half {
        for j in [2 * i - 1, 2 * i, 2 * i + 1] {
            if j <= z {
                edges.push((i, j));
            }
        }
    }
    for i in half + 1..=z {
        edges.push((i, 2 * i - z - 1));
    }
    BipartiteGraph::new(z, z, &edges)
}

/// The perfect matching of `H_z`: `u_i–v_{2i}` for `i ≤ z/2`, `u_i–v_{2i-z-1}`
/// above that.
pub fn h_gadget_witness(z: usize) -> Result<Matching> {
    check_z(z)?;
    let pairs: Vec<(usize, usize)> =
        (1..=z).map(|i| if i <= z / 2 { (i, 2 * i) } else { (i, 2 * i - z - 1) }).collect();
    Matching::from_pairs(z, z, &pairs)
}
