//! Model files: one of a Lindblad operator list, a GKS matrix or the six
//! projected parameters, as JSON with complex entries written `[re, im]`.

use std::fs;
use std::path::Path;

use bloch_trap_core::linalg::{c, Mat2c, CZERO};
use bloch_trap_core::model::Gks;
use bloch_trap_core::{
    gks_from_lindblad, project_to_six_params, validate_inequality, GksModel, LindbladOp,
    ProjectedSystem,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub type Complex = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projected {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lindblad_ops: Option<Vec<[[Complex; 2]; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gks: Option<[[Complex; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projected: Option<Projected>,
    /// Ignored: a Hamiltonian term is absorbed by the unbounded controls.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian_drift: Option<[[Complex; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A validated model. `ops` is only present when the file listed operators.
#[derive(Debug, Clone)]
pub struct Model {
    pub label: Option<String>,
    pub ops: Option<Vec<LindbladOp>>,
    pub system: ProjectedSystem,
    pub warnings: Vec<String>,
}

fn mat2(m: &[[Complex; 2]; 2]) -> Mat2c {
    let mut out = [[CZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = c(m[i][j][0], m[i][j][1]);
        }
    }
    out
}

fn gks(m: &[[Complex; 3]; 3]) -> Gks {
    let mut out = [[CZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = c(m[i][j][0], m[i][j][1]);
        }
    }
    out
}

fn invalid(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::InvalidModel(format!("{field}: {e}"))
}

impl ModelFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let message = if field == "." {
                e.inner().to_string()
            } else {
                format!("field `{field}`: {}", e.inner())
            };
            CliError::Parse { path: path.to_path_buf(), message }
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Checks the representation and converts it to a projected system.
    pub fn validate(&self, path: &Path) -> Result<Model> {
        let present = [self.lindblad_ops.is_some(), self.gks.is_some(), self.projected.is_some()];
        if present.iter().filter(|&&x| x).count() != 1 {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                message: "expected exactly one of `lindblad_ops`, `gks`, `projected`".into(),
            });
        }
        let mut warnings = Vec::new();
        if self.hamiltonian_drift.is_some() {
            warnings.push(
                "hamiltonian_drift is ignored: the controls absorb any Hamiltonian term".to_string(),
            );
        }

        let (ops, system) = if let Some(list) = &self.lindblad_ops {
            let ops: Vec<LindbladOp> = list.iter().map(|m| LindbladOp::new(mat2(m))).collect();
            let g = gks_from_lindblad(&ops).map_err(|e| invalid("lindblad_ops", e))?;
            let p = project_to_six_params(&g).map_err(|e| invalid("lindblad_ops", e))?;
            (Some(ops), p)
        } else if let Some(m) = &self.gks {
            let g = GksModel::new(gks(m)).map_err(|e| invalid("gks", e))?;
            (None, project_to_six_params(&g).map_err(|e| invalid("gks", e))?)
        } else {
            let pr = self.projected.as_ref().expect("one representation is present");
            let p = ProjectedSystem::new(pr.a, pr.b).map_err(|e| invalid("projected", e))?;
            if !p.is_positive_semidefinite() {
                return Err(invalid("projected", "GKS matrix is not positive semidefinite"));
            }
            (None, p)
        };
        if !validate_inequality(&system) {
            return Err(CliError::InvalidModel(
                "a1 b1² + a2 b2² + a3 b3² <= 4 a1 a2 a3 does not hold".into(),
            ));
        }
        Ok(Model { label: self.label.clone(), ops, system, warnings })
    }
}

pub fn load(path: &Path) -> Result<Model> {
    ModelFile::read(path)?.validate(path)
}
