use super::gate::GateElement;

/// `fSWAP_{i,j}` as a palindromic chain of nearest-neighbour swaps, in
/// application order.
pub fn fswap_chain(i: usize, j: usize) -> Vec<GateElement> {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    if hi == lo + 1 {
        return vec![GateElement::fswap(lo, hi)];
    }
    let up: Vec<GateElement> = (lo..hi - 1).map(|k| GateElement::fswap(k, k + 1)).collect();
    let mut out = up.clone();
    out.push(GateElement::fswap(hi - 1, hi));
    out.extend(up.into_iter().rev());
    out
}

/// Rewrites an element over `{PS₁, BS₁,₂, PA₁,₂, fSWAP_{k,k+1}}`, in
/// application order. Exact in the fermionic sector.
pub fn decompose_distant(gate: &GateElement) -> Vec<GateElement> {
    match *gate {
        GateElement::PhaseShift { i, theta } => {
            conjugate(&[(1, i)], GateElement::ps(1, theta))
        }
        GateElement::BeamSplitter { i, j, theta } => {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            conjugate(&[(1, a), (2, b)], GateElement::bs(1, 2, theta))
        }
        GateElement::ParametricAmplifier { i, j, theta } => {
            let (a, b, t) = if i < j { (i, j, theta) } else { (j, i, -theta) };
            conjugate(&[(1, a), (2, b)], GateElement::pa(1, 2, t))
        }
        GateElement::FSwap { i, j } => fswap_chain(i, j),
    }
}

/// `W† core W` with `W` the listed swaps applied in order.
fn conjugate(swaps: &[(usize, usize)], core: GateElement) -> Vec<GateElement> {
    let w: Vec<GateElement> = swaps
        .iter()
        .filter(|(p, q)| p != q)
        .flat_map(|&(p, q)| fswap_chain(p, q))
        .collect();
    let mut out = w.clone();
    out.push(core);
    out.extend(w.into_iter().rev());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::optics::dense::{gate_matrix, sequence_matrix};

    fn canonical(g: &GateElement) -> bool {
        match *g {
            GateElement::PhaseShift { i, .. } => i == 1,
            GateElement::BeamSplitter { i, j, .. } | GateElement::ParametricAmplifier { i, j, .. } => {
                (i, j) == (1, 2)
            }
            GateElement::FSwap { i, j } => j == i + 1,
        }
    }

    #[test]
    fn phase_shift_on_mode_one_is_already_canonical() {
        assert_eq!(decompose_distant(&GateElement::ps(1, 0.2)), vec![GateElement::ps(1, 0.2)]);
    }

    #[test]
    fn all_targets_on_five_modes() {
        let m = 5;
        let mut targets = Vec::new();
        for i in 1..=m {
            targets.push(GateElement::ps(i, 0.37));
            for j in 1..=m {
                if i != j {
                    targets.push(GateElement::bs(i, j, 0.71));
                    targets.push(GateElement::pa(i, j, -0.52));
                    targets.push(GateElement::fswap(i, j));
                }
            }
        }
        for g in targets {
            let seq = decompose_distant(&g);
            assert!(seq.iter().all(canonical), "{g}");
            let lhs = sequence_matrix(&seq, m, 0.0).unwrap();
            let rhs = gate_matrix(&g, m, 0.0).unwrap();
            assert!(max_abs_diff(&lhs, &rhs) < 1e-10, "{g}");
        }
    }
}
