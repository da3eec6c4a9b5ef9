//! Per-condition verdicts for a candidate `n`-fit graph.

use super::{sample_discrepancy, worst_codegree, RepairSummary, SamplingReport, ToleranceProfile};
use crate::graph::{spectral_discrepancy_bound, Graph, SpectralReport};
use serde::Serialize;

/// How firmly a condition is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    /// Checked exactly, or implied by the spectral certificate.
    Proven,
    /// No violation among the sampled set pairs.
    SampledConsistent,
    Failed,
}

/// Where the worst deviation of a condition was observed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    Vertex { vertex: usize },
    Pair { v: usize, w: usize },
    Sets { s: Vec<usize>, t: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionEntry {
    pub status: ConditionStatus,
    /// `exact`, `spectral` or `sampled`.
    pub method: &'static str,
    pub threshold: f64,
    pub worst_deviation: f64,
    /// `threshold − worst_deviation`.
    pub slack: f64,
    /// Upper bound on the deviation when `method` is `spectral`.
    pub certified_bound: Option<f64>,
    pub witness: Witness,
}

impl ConditionEntry {
    fn exact(threshold: f64, worst: f64, witness: Witness) -> Self {
        ConditionEntry {
            status: if worst <= threshold {
                ConditionStatus::Proven
            } else {
                ConditionStatus::Failed
            },
            method: "exact",
            threshold,
            worst_deviation: worst,
            slack: threshold - worst,
            certified_bound: None,
            witness,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallStatus {
    AllProven,
    SampledOnly,
    Failed,
}

/// Verdicts on the size (A), degree (B), codegree (C) and discrepancy (D)
/// conditions, with build provenance when produced by the builder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitCertificate {
    pub n: usize,
    pub seed: Option<u64>,
    pub retries_used: u32,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub size: ConditionEntry,
    pub degree: ConditionEntry,
    pub codegree: ConditionEntry,
    pub discrepancy: ConditionEntry,
    pub spectral: Option<SpectralReport>,
    pub sampling: Option<SamplingReport>,
    pub repair: Option<RepairSummary>,
}

impl FitCertificate {
    pub fn entries(&self) -> [&ConditionEntry; 4] {
        [&self.size, &self.degree, &self.codegree, &self.discrepancy]
    }

    pub fn overall(&self) -> OverallStatus {
        let e = self.entries();
        if e.iter().any(|c| c.status == ConditionStatus::Failed) {
            OverallStatus::Failed
        } else if e.iter().any(|c| c.status == ConditionStatus::SampledConsistent) {
            OverallStatus::SampledOnly
        } else {
            OverallStatus::AllProven
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyOptions {
    /// Random set pairs tried when the spectral bound is not strong enough.
    pub discrepancy_pairs: usize,
    pub sample_seed: u64,
    pub spectral: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            discrepancy_pairs: 10_000,
            sample_seed: 0,
            spectral: true,
        }
    }
}

/// [`certify_fit_with`] using default options.
pub fn certify_fit(g: &Graph, n: usize, tol: &ToleranceProfile) -> FitCertificate {
    certify_fit_with(g, n, tol, &CertifyOptions::default())
}

/// Checks (A)–(C) exactly. (D) is `Proven` when the spectral certificate
/// beats the threshold, otherwise decided on sampled set pairs.
pub fn certify_fit_with(g: &Graph, n: usize, tol: &ToleranceProfile, opts: &CertifyOptions) -> FitCertificate {
    let order = g.vertex_count();
    let want_order = (2 * n).saturating_sub(1);
    let want_edges = ((n + 1) * want_order).div_ceil(2);
    let size_dev = order.abs_diff(want_order) + g.edge_count().abs_diff(want_edges);
    let size = ConditionEntry::exact(0.0, size_dev as f64, Witness::None);

    let mut spare_high = n % 2 == 0;
    let mut degree_worst = (0usize, Witness::None);
    for v in 0..order {
        let d = g.degree(v);
        let dev = if d == n + 2 && spare_high {
            spare_high = false;
            0
        } else {
            d.abs_diff(n + 1)
        };
        if dev > degree_worst.0 || (dev > 0 && degree_worst.1 == Witness::None) {
            degree_worst = (dev, Witness::Vertex { vertex: v });
        }
    }
    let degree = ConditionEntry::exact(0.0, degree_worst.0 as f64, degree_worst.1);

    let codegree = if order >= 2 {
        let ((v, w), dev) = worst_codegree(g, n as f64 / 2.0);
        ConditionEntry::exact(tol.codegree_tolerance(n), dev, Witness::Pair { v, w })
    } else {
        ConditionEntry::exact(tol.codegree_tolerance(n), 0.0, Witness::None)
    };

    let threshold = tol.discrepancy_tolerance(n);
    let spectral = if opts.spectral && order >= 2 {
        spectral_discrepancy_bound(g).ok()
    } else {
        None
    };
    let sample = sample_discrepancy(g, opts.discrepancy_pairs, opts.sample_seed);
    let bound = spectral.as_ref().map(|r| r.discrepancy_bound(order));
    let (status, method) = match bound {
        Some(b) if b <= threshold => (ConditionStatus::Proven, "spectral"),
        _ if sample.worst_deviation <= threshold => (ConditionStatus::SampledConsistent, "sampled"),
        _ => (ConditionStatus::Failed, "sampled"),
    };
    let discrepancy = ConditionEntry {
        status,
        method,
        threshold,
        worst_deviation: sample.worst_deviation,
        slack: threshold - sample.worst_deviation,
        certified_bound: bound,
        witness: sample.witness,
    };

    FitCertificate {
        n,
        seed: None,
        retries_used: 0,
        vertex_count: order,
        edge_count: g.edge_count(),
        size,
        degree,
        codegree,
        discrepancy,
        spectral,
        sampling: None,
        repair: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k5_at_n3() {
        let c = certify_fit(&Graph::complete(5), 3, &ToleranceProfile::default());
        assert_eq!(c.size.status, ConditionStatus::Proven);
        assert_eq!(c.degree.status, ConditionStatus::Proven);
        assert_eq!(c.codegree.status, ConditionStatus::Proven);
        assert!((c.codegree.worst_deviation - 1.5).abs() < 1e-12);
        assert!((c.codegree.threshold - 3f64.powf(0.7)).abs() < 1e-12);
        assert_eq!(c.discrepancy.status, ConditionStatus::Failed);
        assert_eq!(
            c.discrepancy.witness,
            Witness::Sets {
                s: vec![0, 1, 2, 3, 4],
                t: vec![0, 1, 2, 3, 4]
            }
        );
        assert_eq!(c.overall(), OverallStatus::Failed);
    }

    #[test]
    fn low_degree_vertex_is_named() {
        // K5 minus the edge 2–4 leaves vertices 2 and 4 at degree 3 = n.
        let g = Graph::complete(5).filter_edges(|u, v| (u, v) != (2, 4));
        let c = certify_fit(&g, 3, &ToleranceProfile::default());
        assert_eq!(c.degree.status, ConditionStatus::Failed);
        assert_eq!(c.degree.witness, Witness::Vertex { vertex: 2 });
        assert_eq!(c.size.status, ConditionStatus::Failed);
    }

    #[test]
    fn first_offending_vertex_is_named() {
        let c = certify_fit(&Graph::complete(3), 2, &ToleranceProfile::default());
        assert_eq!(c.degree.status, ConditionStatus::Failed);
        assert_eq!(c.degree.witness, Witness::Vertex { vertex: 0 });
    }

    #[test]
    fn larger_multiplier_never_fails_more() {
        let g = crate::fit::sample_uniform_graph(20, 4).unwrap();
        let rank = |s: ConditionStatus| match s {
            ConditionStatus::Failed => 0,
            _ => 1,
        };
        let mut prev: Option<FitCertificate> = None;
        for m in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let c = certify_fit(&g, 20, &ToleranceProfile::with_multiplier(m));
            if let Some(p) = &prev {
                for (a, b) in p.entries().iter().zip(c.entries()) {
                    assert!(rank(b.status) >= rank(a.status));
                }
            }
            prev = Some(c);
        }
    }
}
