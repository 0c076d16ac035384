//! Run statistics, clique-size histograms, the lower-bound family for
//! arbitrary representations, and size-ratio reports.

use std::io::{self, Write};
use std::time::Duration;

use thiserror::Error;

use crate::graph::{connected_components, is_chordal, maximal_cliques, Graph};
use crate::representation::{is_minimal, MultiplicityMap, Representation, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("graph is not chordal")]
    NotChordal,
    #[error("no runs to aggregate")]
    NoRuns,
    #[error("bin width must be at least 1")]
    ZeroBinWidth,
    #[error("lower-bound family needs 1 <= k <= {max}, got {k}")]
    FamilyOrder { k: u32, max: u32 },
    #[error("minimized representation is not minimal")]
    NotMinimal,
    #[error("multiplicities sum to {sum}, original tree has {t} nodes")]
    MultiplicitySum { sum: usize, t: usize },
    #[error("original size {size} exceeds Σ k_j t_j = {bound}")]
    WeightedBound { size: usize, bound: usize },
    #[error("minimal size {size} exceeds 2m + n = {bound}")]
    LinearBound { size: usize, bound: usize },
}

/// One row of generation statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub n: usize,
    pub density: f64,
    pub components: usize,
    pub clique_count: usize,
    pub clique_min: usize,
    pub clique_max: usize,
    pub clique_mean: f64,
    /// Population standard deviation of the maximal clique sizes.
    pub clique_sd: f64,
    pub build_seconds: f64,
    pub clique_sizes: Vec<usize>,
}

pub const REPORT_HEADER: &str =
    "n,density,components,clique_count,clique_min,clique_max,clique_mean,clique_sd,build_seconds";

/// Statistics of a chordal graph.
///
/// Clique sizes are read off the node loads when `rep` is a minimal
/// representation of `g` (its nodes are exactly the maximal cliques) and
/// computed from a perfect elimination order otherwise.
pub fn run_report(
    g: &Graph,
    rep: Option<&Representation>,
    elapsed: Duration,
) -> Result<RunReport, ExperimentError> {
    let mut sizes: Vec<usize> = match rep.filter(|r| is_minimal(r)) {
        Some(rep) => rep.loads().into_iter().map(|(_, t)| t).collect(),
        None => {
            let peo = is_chordal(g).ok_or(ExperimentError::NotChordal)?;
            maximal_cliques(g, &peo)
                .expect("order comes from the recogniser")
                .sizes()
        }
    };
    sizes.sort_unstable();
    let count = sizes.len();
    let mean = if count == 0 {
        0.0
    } else {
        sizes.iter().sum::<usize>() as f64 / count as f64
    };
    let var = if count == 0 {
        0.0
    } else {
        sizes
            .iter()
            .map(|&s| (s as f64 - mean).powi(2))
            .sum::<f64>()
            / count as f64
    };
    Ok(RunReport {
        n: g.n(),
        density: g.density(),
        components: connected_components(g).len(),
        clique_count: count,
        clique_min: sizes.first().copied().unwrap_or(0),
        clique_max: sizes.last().copied().unwrap_or(0),
        clique_mean: mean,
        clique_sd: var.sqrt(),
        build_seconds: elapsed.as_secs_f64(),
        clique_sizes: sizes,
    })
}

/// Column-wise means of a batch of reports, in header order.
pub fn mean_row(reports: &[RunReport]) -> Result<[f64; 9], ExperimentError> {
    if reports.is_empty() {
        return Err(ExperimentError::NoRuns);
    }
    let mut acc = [0.0; 9];
    for r in reports {
        let row = [
            r.n as f64,
            r.density,
            r.components as f64,
            r.clique_count as f64,
            r.clique_min as f64,
            r.clique_max as f64,
            r.clique_mean,
            r.clique_sd,
            r.build_seconds,
        ];
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    Ok(acc.map(|a| a / reports.len() as f64))
}

/// Writes the header, one row per run and a final row labelled `mean`.
pub fn write_reports_csv<W: Write>(reports: &[RunReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(
            out,
            "{},{:.6},{},{},{},{},{:.4},{:.4},{:.6}",
            r.n,
            r.density,
            r.components,
            r.clique_count,
            r.clique_min,
            r.clique_max,
            r.clique_mean,
            r.clique_sd,
            r.build_seconds
        )?;
    }
    if let Ok(mean) = mean_row(reports) {
        writeln!(
            out,
            "mean,{:.6},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.6}",
            mean[1], mean[2], mean[3], mean[4], mean[5], mean[6], mean[7], mean[8]
        )?;
    }
    out.flush()
}

/// Average number of maximal cliques per run whose size falls in each
/// interval `[lo, hi]` of width `bin_width`, starting at 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub bin_width: usize,
    pub runs: usize,
    /// `(lo, hi, avg_frequency)` for every bin from `[1, w]` up to the bin
    /// holding the largest clique.
    pub bins: Vec<(usize, usize, f64)>,
}

impl Histogram {
    pub fn total_frequency(&self) -> f64 {
        self.bins.iter().map(|b| b.2).sum()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "bin_lo,bin_hi,avg_frequency")?;
        for &(lo, hi, f) in &self.bins {
            writeln!(out, "{lo},{hi},{f}")?;
        }
        out.flush()
    }
}

pub fn histogram(reports: &[RunReport], bin_width: usize) -> Result<Histogram, ExperimentError> {
    if bin_width < 1 {
        return Err(ExperimentError::ZeroBinWidth);
    }
    if reports.is_empty() {
        return Err(ExperimentError::NoRuns);
    }
    let largest = reports
        .iter()
        .flat_map(|r| r.clique_sizes.iter().copied())
        .max()
        .unwrap_or(0);
    let bin_count = largest.div_ceil(bin_width);
    let mut counts = vec![0usize; bin_count];
    for size in reports.iter().flat_map(|r| r.clique_sizes.iter().copied()) {
        if size > 0 {
            counts[(size - 1) / bin_width] += 1;
        }
    }
    let runs = reports.len();
    let bins = counts
        .into_iter()
        .enumerate()
        .map(|(b, c)| {
            (
                b * bin_width + 1,
                (b + 1) * bin_width,
                c as f64 / runs as f64,
            )
        })
        .collect();
    Ok(Histogram {
        bin_width,
        runs,
        bins,
    })
}

/// Largest supported order of the lower-bound family; `k = 5` already needs
/// close to 10⁸ node-subtree incidences.
pub const MAX_FAMILY_ORDER: u32 = 4;

/// Closed-form parameters of the lower-bound family of order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub k: u32,
    /// Tree nodes and subtrees: `6·3^{2k}`.
    pub n: usize,
    /// Edges of the intersection graph: `2·3^{2k} + 3^{k+1}(3^{k+1}−1)/2`.
    pub m: usize,
    /// Lower bound on the total leaf count: `6·3^{3k}`.
    pub leaf_bound: usize,
}

impl FamilyParams {
    pub fn new(k: u32) -> Self {
        let q = 3usize.pow(2 * k);
        let clique = 3usize.pow(k + 1);
        Self {
            k,
            n: 6 * q,
            m: 2 * q + clique * (clique - 1) / 2,
            leaf_bound: 6 * 3usize.pow(3 * k),
        }
    }
}

/// A representation on a tree with as many nodes as subtrees whose total
/// size is far above `2m + n`.
///
/// With `q = 3^{2k}` the tree is a path `v_1..v_{4q}` (ids `0..4q`) plus a
/// star `u_1..u_{2q}` centred at `u_1` (ids `4q..6q`), with `u_1` attached
/// to `v_{4q}`. Subtrees, in order: two single-node subtrees on each of
/// `v_1..v_{2q}`; `3^{k+1}` copies of the whole star; and `2q − 3^{k+1}`
/// single-node subtrees on `v_{2q+1}, v_{2q+2}, …`.
pub fn lower_bound_family(k: u32) -> Result<Representation, ExperimentError> {
    if !(1..=MAX_FAMILY_ORDER).contains(&k) {
        return Err(ExperimentError::FamilyOrder {
            k,
            max: MAX_FAMILY_ORDER,
        });
    }
    let q = 3usize.pow(2 * k);
    let copies = 3usize.pow(k + 1);
    let path_len = 4 * q;
    let star_len = 2 * q;
    let center = path_len;

    let nodes: Vec<usize> = (0..path_len + star_len).collect();
    let mut edges: Vec<(usize, usize)> = (1..path_len).map(|v| (v - 1, v)).collect();
    edges.extend((center + 1..center + star_len).map(|u| (center, u)));
    edges.push((path_len - 1, center));
    let tree = Tree::new(nodes, &edges).expect("path plus star is a tree");

    let mut subtrees: Vec<Vec<usize>> = Vec::with_capacity(6 * q);
    for v in 0..2 * q {
        subtrees.push(vec![v]);
        subtrees.push(vec![v]);
    }
    let star: Vec<usize> = (center..center + star_len).collect();
    subtrees.extend(std::iter::repeat_n(star, copies));
    subtrees.extend((2 * q..2 * q + (2 * q - copies)).map(|v| vec![v]));
    Ok(Representation::new(tree, subtrees).expect("family subtrees are connected"))
}

/// Size accounting for a representation and a minimal one obtained from it
/// by contraction.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeRatioReport {
    pub n: usize,
    pub m: usize,
    /// `Σ_i |V(T'_i)|` of the original representation.
    pub total_size: usize,
    /// `Σ_i |L(T'_i)|` of the original representation.
    pub leaf_count: usize,
    /// `Σ_j k_j t_j` over the minimal representation.
    pub weighted_size: usize,
    /// `Σ_j t_j` of the minimal representation.
    pub minimal_size: usize,
    pub bound_2m_plus_n: usize,
    /// `total_size / (2m + n)`.
    pub ratio: f64,
    pub sqrt_n: f64,
}

pub const SIZE_RATIO_HEADER: &str =
    "n,m,total_size,leaf_count,weighted_size,minimal_size,bound_2m_plus_n,ratio,sqrt_n";

impl SizeRatioReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{:.6}",
            self.n,
            self.m,
            self.total_size,
            self.leaf_count,
            self.weighted_size,
            self.minimal_size,
            self.bound_2m_plus_n,
            self.ratio,
            self.sqrt_n
        )
    }
}

/// Checks `Σ k_j = t'`, `Σ|V(T'_i)| ≤ Σ k_j t_j` and `Σ t_j ≤ 2m + n`, and
/// reports the sizes involved.
pub fn size_ratio_report(
    original: &Representation,
    minimal: &Representation,
    mult: &MultiplicityMap,
) -> Result<SizeRatioReport, ExperimentError> {
    if !is_minimal(minimal) {
        return Err(ExperimentError::NotMinimal);
    }
    if mult.total() != original.t() {
        return Err(ExperimentError::MultiplicitySum {
            sum: mult.total(),
            t: original.t(),
        });
    }
    let n = original.n();
    let m = minimal.intersection_edge_count();
    let total_size = original.size();
    let weighted_size = mult.weighted_size(minimal);
    if total_size > weighted_size {
        return Err(ExperimentError::WeightedBound {
            size: total_size,
            bound: weighted_size,
        });
    }
    let minimal_size = minimal.size();
    let bound = 2 * m + n;
    if minimal_size > bound {
        return Err(ExperimentError::LinearBound {
            size: minimal_size,
            bound,
        });
    }
    Ok(SizeRatioReport {
        n,
        m,
        total_size,
        leaf_count: original.leaf_count(),
        weighted_size,
        minimal_size,
        bound_2m_plus_n: bound,
        ratio: total_size as f64 / bound as f64,
        sqrt_n: (n as f64).sqrt(),
    })
}

/// Least-squares line `y = slope·x + intercept` with its coefficient of
/// determination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    if points.len() < 2 {
        return None;
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::minimize;

    #[test]
    fn report_of_complete_graph() {
        let r = run_report(&Graph::complete(5), None, Duration::ZERO).unwrap();
        assert_eq!((r.clique_count, r.clique_min, r.clique_max), (1, 5, 5));
        assert_eq!((r.clique_mean, r.clique_sd), (5.0, 0.0));
        assert_eq!(r.components, 1);
        assert_eq!(r.density, 1.0);
    }

    #[test]
    fn report_of_empty_graph() {
        let r = run_report(&Graph::empty(4), None, Duration::ZERO).unwrap();
        assert_eq!(r.components, 4);
        assert_eq!(r.clique_count, 4);
        assert_eq!(r.clique_sizes, vec![1, 1, 1, 1]);
    }

    #[test]
    fn report_rejects_non_chordal() {
        assert_eq!(
            run_report(&Graph::cycle(4), None, Duration::ZERO),
            Err(ExperimentError::NotChordal)
        );
    }

    #[test]
    fn csv_layout() {
        let r = run_report(&Graph::complete(3), None, Duration::from_millis(2)).unwrap();
        let mut buf = Vec::new();
        write_reports_csv(&[r.clone(), r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], REPORT_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("mean,1.000000,1.0000,1.0000,3.0000"));
    }

    fn sizes(s: &[usize]) -> RunReport {
        RunReport {
            n: 0,
            density: 0.0,
            components: 0,
            clique_count: s.len(),
            clique_min: 0,
            clique_max: 0,
            clique_mean: 0.0,
            clique_sd: 0.0,
            build_seconds: 0.0,
            clique_sizes: s.to_vec(),
        }
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&[sizes(&[5])], 5).unwrap();
        assert_eq!(h.bins, vec![(1, 5, 1.0)]);
        let h = histogram(&[sizes(&[3]), sizes(&[7])], 5).unwrap();
        assert_eq!(h.bins, vec![(1, 5, 0.5), (6, 10, 0.5)]);
        assert_eq!(
            histogram(&[sizes(&[3])], 0),
            Err(ExperimentError::ZeroBinWidth)
        );
        assert_eq!(histogram(&[], 5), Err(ExperimentError::NoRuns));
    }

    #[test]
    fn family_k1_counts() {
        let rep = lower_bound_family(1).unwrap();
        let params = FamilyParams::new(1);
        assert_eq!((params.n, params.m, params.leaf_bound), (54, 54, 162));
        assert_eq!(rep.n(), 54);
        assert_eq!(rep.t(), 54);
        assert_eq!(rep.intersection_graph().m(), 54);
        assert_eq!(rep.leaf_count(), 198);
    }

    #[test]
    fn family_rejects_out_of_range_orders() {
        assert!(lower_bound_family(0).is_err());
        assert!(lower_bound_family(MAX_FAMILY_ORDER + 1).is_err());
    }

    #[test]
    fn family_k1_minimized() {
        let rep = lower_bound_family(1).unwrap();
        let (min, mult) = minimize(&rep);
        let report = size_ratio_report(&rep, &min, &mult).unwrap();
        assert_eq!(report.bound_2m_plus_n, 162);
        assert!(report.minimal_size <= 162);
        assert_eq!(report.leaf_count, 198);
        assert_eq!(report.total_size, 207);
    }

    #[test]
    fn fit_of_a_line() {
        let fit = linear_fit(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[(1.0, 1.0)]).is_none());
    }
}
