//! Serializable report records shared by the library, the test suites and
//! the command-line runner. Exact rationals are carried as strings so the
//! reports stay lossless and byte-reproducible.

use serde::{Deserialize, Serialize};

use crate::construct::{NormalizerReport, StructureCertificate};
use crate::geometry::{CpcVerdict, SpectrumReport};
use crate::liealg::RestrictedDecomposition;
use crate::linalg::rat_to_f64;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSummary {
    pub coeffs: Vec<i64>,
    pub level: i64,
    pub length_sq: String,
    pub multiplicity: usize,
    /// Values of the root functional on the a-basis.
    pub functional: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub label: String,
    pub family: String,
    pub rank: usize,
    pub dim: usize,
    pub an_dim: usize,
    pub k0_dim: usize,
    pub metric_scale: String,
    pub positive_roots: Vec<RootSummary>,
    /// Exact Gram matrix of the root vectors H_lambda (positives).
    pub h_gram: Vec<Vec<String>>,
}

impl DecompositionSummary {
    pub fn from_decomposition(d: &RestrictedDecomposition) -> Self {
        let positive_roots = d
            .positive_roots()
            .iter()
            .map(|r| RootSummary {
                coeffs: r.coeffs.coeffs.clone(),
                level: r.coeffs.level(),
                length_sq: d.system.length_sq(&r.coeffs).to_string(),
                multiplicity: r.basis.len(),
                functional: r.functional.iter().map(|x| x.to_string()).collect(),
            })
            .collect();
        let g = d.h_gram();
        let h_gram = (0..g.nrows)
            .map(|i| (0..g.ncols).map(|j| g.at(i, j).to_string()).collect())
            .collect();
        DecompositionSummary {
            label: d.label.clone(),
            family: d.system.family.to_string(),
            rank: d.rank(),
            dim: d.dim(),
            an_dim: d.an_dim(),
            k0_dim: d.k0_basis.len(),
            metric_scale: d.metric_scale.to_string(),
            positive_roots,
            h_gram,
        }
    }

    /// Aligned text table of the positive roots.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{} ({}{}): dim {}, a+n dim {}, k0 dim {}, metric scale {}\n",
            self.label, self.family, self.rank, self.dim, self.an_dim, self.k0_dim,
            self.metric_scale
        );
        out.push_str("  coeffs          level  length^2  mult\n");
        for r in &self.positive_roots {
            out.push_str(&format!(
                "  {:<14}  {:>5}  {:>8}  {:>4}\n",
                format!("{:?}", r.coeffs),
                r.level,
                r.length_sq,
                r.multiplicity
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumOut {
    pub direction: Vec<f64>,
    /// (value, multiplicity), ascending.
    pub eigenvalues: Vec<(f64, usize)>,
    pub sorted: Vec<f64>,
    pub cluster_tol: f64,
    pub self_adjoint_residual: f64,
}

impl From<&SpectrumReport> for SpectrumOut {
    fn from(r: &SpectrumReport) -> Self {
        SpectrumOut {
            direction: r.direction.clone(),
            eigenvalues: r.eigenvalues.clone(),
            sorted: r.sorted.clone(),
            cluster_tol: r.cluster_tol,
            self_adjoint_residual: r.self_adjoint_residual,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictOut {
    pub is_cpc: bool,
    pub max_spectrum_deviation: f64,
    pub witness_directions: Option<(Vec<f64>, Vec<f64>)>,
    pub samples: usize,
    pub cpc_tol: f64,
}

impl From<&CpcVerdict> for VerdictOut {
    fn from(v: &CpcVerdict) -> Self {
        VerdictOut {
            is_cpc: v.is_cpc,
            max_spectrum_deviation: v.max_spectrum_deviation,
            witness_directions: v.witness_directions.clone(),
            samples: v.samples,
            cpc_tol: v.cpc_tol,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateOut {
    pub kind: String,
    pub generators: Vec<Vec<String>>,
    pub residuals: Vec<(String, f64)>,
}

impl From<&StructureCertificate> for CertificateOut {
    fn from(c: &StructureCertificate) -> Self {
        CertificateOut {
            kind: format!("{:?}", c.kind),
            generators: c
                .generators
                .iter()
                .map(|g| g.iter().map(|x| x.to_string()).collect())
                .collect(),
            residuals: c.residuals.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizerOut {
    pub m_dim: usize,
    pub m_refined_dim: usize,
    pub dim_v: usize,
    pub orbit_ranks: Vec<usize>,
    pub transitive_possible: bool,
}

impl From<&NormalizerReport> for NormalizerOut {
    fn from(n: &NormalizerReport) -> Self {
        NormalizerOut {
            m_dim: n.m_dim,
            m_refined_dim: n.m_refined_dim,
            dim_v: n.dim_v,
            orbit_ranks: n.orbit_ranks.clone(),
            transitive_possible: n.transitive_possible,
        }
    }
}

/// One row of the acceptance table: claim, paper value, computed value,
/// tolerance, verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionRow {
    pub id: String,
    pub claim: String,
    pub paper_value: String,
    pub computed: String,
    pub tolerance: String,
    pub pass: bool,
}

impl CriterionRow {
    pub fn table_line(&self) -> String {
        format!(
            "{:<4} {:<58} {:<26} {:<30} {:<10} {}",
            self.id,
            truncate(&self.claim, 58),
            truncate(&self.paper_value, 26),
            truncate(&self.computed, 30),
            self.tolerance,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        let head: String = s.chars().take(n.saturating_sub(3)).collect();
        format!("{head}...")
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn fmt_spectrum(sorted: &[f64]) -> String {
    let parts: Vec<String> = sorted.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn fmt_rat_f64(r: &crate::linalg::Rat) -> f64 {
    rat_to_f64(r)
}
