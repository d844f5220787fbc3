use std::path::Path;

use elliptica::elliptic::LatticeSumPolicy;
use elliptica::field::FieldConfig;
use elliptica::{Complex64, Lattice};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub w1_re: f64,
    pub w1_im: f64,
    pub w2_re: f64,
    pub w2_im: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { w1_re: 1.0, w1_im: 0.0, w2_re: 0.0, w2_im: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationConfig {
    pub radius: u32,
    pub tail_tol: f64,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        let p = LatticeSumPolicy::default();
        TruncationConfig { radius: p.radius, tail_tol: p.tail_tol }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub nu: usize,
    pub nv: usize,
    pub end_cutoff: f64,
}

impl Default for MeshConfig {
    fn default() -> Self {
        let f = FieldConfig::default();
        MeshConfig { nu: f.mesh_nu, nv: f.mesh_nv, end_cutoff: f.end_cutoff }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSection {
    pub c: f64,
    pub copies_x: usize,
    pub copies_y: usize,
}

impl Default for FieldSection {
    fn default() -> Self {
        FieldSection { c: 1.0, copies_x: 1, copies_y: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub lattice: LatticeConfig,
    pub truncation: TruncationConfig,
    pub mesh: MeshConfig,
    pub field: FieldSection,
    pub quad_tol: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice: LatticeConfig::default(),
            truncation: TruncationConfig::default(),
            mesh: MeshConfig::default(),
            field: FieldSection::default(),
            quad_tol: FieldConfig::default().quad_tol,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            CliError::Validation(format!("malformed config at line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let l = self.lattice()?;
        self.policy().validate(&l)?;
        self.field_config().validate()?;
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice, CliError> {
        let l = &self.lattice;
        Ok(Lattice::new(Complex64::new(l.w1_re, l.w1_im), Complex64::new(l.w2_re, l.w2_im))?)
    }

    pub fn policy(&self) -> LatticeSumPolicy {
        LatticeSumPolicy { radius: self.truncation.radius, tail_tol: self.truncation.tail_tol }
    }

    pub fn field_config(&self) -> FieldConfig {
        FieldConfig {
            c: self.field.c,
            mesh_nu: self.mesh.nu,
            mesh_nv: self.mesh.nv,
            end_cutoff: self.mesh.end_cutoff,
            copies: (self.field.copies_x, self.field.copies_y),
            quad_tol: self.quad_tol,
        }
    }
}
