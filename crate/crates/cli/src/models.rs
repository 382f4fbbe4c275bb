use quadplane::quadalg::Algebra;
use quadplane::ringplane::{build_plane, PlaneModel};
use quadplane::vsets::{
    build_vset_juxtaposition, build_vset_matrices, build_vset_parametrization, build_vset_reduction, Construction, Parametrization,
    VeroneseanModel,
};
use std::sync::Arc;

/// The plane and the requested V-sets. The matrices model is always built
/// since equivalences are fitted against it.
pub struct Models {
    pub plane: PlaneModel,
    pub matrices: VeroneseanModel,
    pub reduction: Option<VeroneseanModel>,
    pub juxtaposition: Option<VeroneseanModel>,
    pub parametrization: Option<Parametrization>,
}

impl Models {
    pub fn get(&self, c: Construction) -> Option<&VeroneseanModel> {
        match c {
            Construction::Matrices => Some(&self.matrices),
            Construction::Reduction => self.reduction.as_ref(),
            Construction::Juxtaposition => self.juxtaposition.as_ref(),
            Construction::Parametrization => None,
        }
    }

    /// The models that are V-sets by construction, matrices first.
    pub fn vsets(&self) -> impl Iterator<Item = &VeroneseanModel> {
        [Some(&self.matrices), self.reduction.as_ref(), self.juxtaposition.as_ref()].into_iter().flatten()
    }
}

pub fn build_models(alg: &Arc<Algebra>, cs: &[Construction]) -> anyhow::Result<Models> {
    let plane = build_plane(alg);
    let matrices = build_vset_matrices(&plane)?;
    let reduction = cs.contains(&Construction::Reduction).then(|| build_vset_reduction(&plane)).transpose()?;
    let juxtaposition = cs.contains(&Construction::Juxtaposition).then(|| build_vset_juxtaposition(&plane)).transpose()?;
    let parametrization =
        cs.contains(&Construction::Parametrization).then(|| build_vset_parametrization(&plane, alg.i())).transpose()?;
    Ok(Models { plane, matrices, reduction, juxtaposition, parametrization })
}
