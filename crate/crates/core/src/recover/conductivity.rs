use crate::elliptic::{DiscreteOperator, PotentialField};
use crate::{Error, Result};

/// `V = ∇²γ^{1/2} / γ^{1/2}` for the operator `-Δ + V`, with the Laplacian
/// applied through the stiffness matrix and the lumped `M_g`. Boundary nodes
/// get zero, matching the convention that `γ ≡ 1` near the boundary.
pub fn conductivity_to_potential(gamma: &[f64], op: &DiscreteOperator) -> Result<PotentialField> {
    let n = op.n_nodes();
    if gamma.len() != n {
        return Err(Error::InvalidInput(format!("conductivity has {} values, expected {n}", gamma.len())));
    }
    if let Some((i, g)) = gamma.iter().enumerate().find(|(_, g)| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::InvalidInput(format!("conductivity must be positive, got {g} at node {i}")));
    }
    let s: Vec<f64> = gamma.iter().map(|g| g.sqrt()).collect();
    let as_ = op.stiffness.mul_vec(&s);
    let values = (0..n)
        .map(|i| if i < op.n_boundary { 0.0 } else { -as_[i] / (op.lumped[i] * s[i]) })
        .collect();
    Ok(PotentialField::from_values(values))
}
