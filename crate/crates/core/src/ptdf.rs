//! DC susceptance matrices and power transfer distribution factors.

use crate::error::PtdfError;
use crate::linalg::{DenseMatrix, LuFactors};
use crate::network::NetworkCase;
use crate::scalar::Real;

/// Nodal (N×N) and branch (L×N) susceptance matrices of a DC network.
#[derive(Debug, Clone)]
pub struct Susceptance<T> {
    pub nodal: DenseMatrix<T>,
    pub branch: DenseMatrix<T>,
}

/// Flow on each line per MW injected at each bus and withdrawn at the slack.
#[derive(Debug, Clone, PartialEq)]
pub struct PtdfMatrix<T> {
    values: DenseMatrix<T>,
    slack_bus: String,
    slack_index: usize,
    line_ids: Vec<String>,
    bus_ids: Vec<String>,
}

pub fn build_susceptance<T: Real>(case: &NetworkCase) -> Result<Susceptance<T>, PtdfError> {
    if !case.is_connected() {
        return Err(PtdfError::Disconnected);
    }
    let n = case.buses.len();
    let mut nodal = DenseMatrix::zeros(n, n);
    let mut branch = DenseMatrix::zeros(case.lines.len(), n);
    for (l, line) in case.lines.iter().enumerate() {
        if !(line.reactance > 0.0) {
            return Err(PtdfError::BadReactance(line.id.clone()));
        }
        let (i, j) = match (case.bus_index(&line.from_bus), case.bus_index(&line.to_bus)) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(PtdfError::Disconnected),
        };
        let b = T::one() / T::lit(line.reactance);
        nodal[(i, i)] += b;
        nodal[(j, j)] += b;
        nodal[(i, j)] -= b;
        nodal[(j, i)] -= b;
        branch[(l, i)] = b;
        branch[(l, j)] = -b;
    }
    Ok(Susceptance { nodal, branch })
}

/// Builds the PTDF matrix by deleting the slack row and column of the nodal
/// matrix and solving one linear system per line.
pub fn compute_ptdf<T: Real>(case: &NetworkCase, slack: &str) -> Result<PtdfMatrix<T>, PtdfError> {
    let slack_index = case
        .bus_index(slack)
        .ok_or_else(|| PtdfError::UnknownSlack(slack.to_string()))?;
    let sus = build_susceptance::<T>(case)?;
    let n = case.buses.len();
    let reduced = sus.nodal.without(Some(slack_index), Some(slack_index));
    let lu = if n > 1 {
        Some(LuFactors::factor(&reduced).map_err(|_| PtdfError::Singular)?)
    } else {
        None
    };

    let mut values = DenseMatrix::zeros(case.lines.len(), n);
    for l in 0..case.lines.len() {
        let Some(lu) = &lu else { break };
        // B_r is symmetric, so row l of F_r B_r⁻¹ is B_r⁻¹ applied to row l of F_r.
        let rhs: Vec<T> = (0..n)
            .filter(|&k| k != slack_index)
            .map(|k| sus.branch[(l, k)])
            .collect();
        let row = lu.solve(&rhs);
        let mut it = row.into_iter();
        for k in 0..n {
            if k != slack_index {
                values[(l, k)] = it.next().expect("reduced row has n - 1 entries");
            }
        }
    }

    Ok(PtdfMatrix {
        values,
        slack_bus: slack.to_string(),
        slack_index,
        line_ids: case.lines.iter().map(|l| l.id.clone()).collect(),
        bus_ids: case.buses.iter().map(|b| b.id.clone()).collect(),
    })
}

/// Line flows (file line order) produced by a balanced injection vector.
pub fn line_flows<T: Real>(ptdf: &PtdfMatrix<T>, injections: &[T]) -> Result<Vec<T>, PtdfError> {
    if injections.len() != ptdf.bus_ids.len() {
        return Err(PtdfError::DimensionMismatch {
            expected: ptdf.bus_ids.len(),
            got: injections.len(),
        });
    }
    let total = injections.iter().fold(T::zero(), |a, &b| a + b);
    let scale = injections.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let tol = T::lit(1e-6).max(T::feasibility_tol()) * scale;
    if total.abs() > tol {
        return Err(PtdfError::Unbalanced(total.to_f64_lossy()));
    }
    Ok(ptdf.values.mul_vec(injections))
}

impl<T: Real> PtdfMatrix<T> {
    pub fn values(&self) -> &DenseMatrix<T> {
        &self.values
    }

    pub fn get(&self, line: usize, bus: usize) -> T {
        self.values[(line, bus)]
    }

    pub fn slack_bus(&self) -> &str {
        &self.slack_bus
    }

    pub fn slack_index(&self) -> usize {
        self.slack_index
    }

    pub fn line_ids(&self) -> &[String] {
        &self.line_ids
    }

    pub fn bus_ids(&self) -> &[String] {
        &self.bus_ids
    }

    pub fn line_index(&self, id: &str) -> Option<usize> {
        self.line_ids.iter().position(|l| l == id)
    }

    pub fn bus_index(&self, id: &str) -> Option<usize> {
        self.bus_ids.iter().position(|b| b == id)
    }

    /// CSV with line ids as row labels and bus ids as column headers,
    /// values rounded to 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("line");
        for b in &self.bus_ids {
            out.push(',');
            out.push_str(b);
        }
        out.push('\n');
        for (l, id) in self.line_ids.iter().enumerate() {
            out.push_str(id);
            for k in 0..self.bus_ids.len() {
                out.push(',');
                out.push_str(&sig9(self.values[(l, k)].to_f64_lossy()));
            }
            out.push('\n');
        }
        out
    }
}

fn sig9(x: f64) -> String {
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn two_bus_susceptance() {
        let s = build_susceptance::<f64>(&fixtures::two_bus()).unwrap();
        assert_eq!(s.nodal, DenseMatrix::from_rows(&[vec![10.0, -10.0], vec![-10.0, 10.0]]));
        assert_eq!(s.branch, DenseMatrix::from_rows(&[vec![10.0, -10.0]]));
    }

    #[test]
    fn triangle_susceptance_is_symmetric_laplacian() {
        let s = build_susceptance::<f64>(&fixtures::triangle()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { -1.0 };
                assert_eq!(s.nodal[(i, j)], want);
            }
        }
    }

    #[test]
    fn pjm5_nodal_rows_sum_to_zero() {
        let case = fixtures::pjm5();
        let s = build_susceptance::<f64>(&case).unwrap();
        for i in 0..5 {
            let sum: f64 = s.nodal.row(i).iter().sum();
            assert!(sum.abs() < 1e-9, "row {i} sums to {sum}");
            // Diagonal equals the sum of incident 1/x.
            let incident: f64 = case
                .lines
                .iter()
                .filter(|l| l.from_bus == case.buses[i].id || l.to_bus == case.buses[i].id)
                .map(|l| 1.0 / l.reactance)
                .sum();
            assert!((s.nodal[(i, i)] - incident).abs() < 1e-9);
        }
    }

    #[test]
    fn two_bus_ptdf_row() {
        let p = compute_ptdf::<f64>(&fixtures::two_bus(), "a").unwrap();
        assert_eq!(p.values().row(0), &[0.0, -1.0]);
    }

    #[test]
    fn triangle_ptdf_matches_hand_solution() {
        // Injecting 1 MW at bus 2 against slack 1: two thirds return directly
        // over 1-2, one third detours 2→3→1.
        let p = compute_ptdf::<f64>(&fixtures::triangle(), "1").unwrap();
        let col: Vec<f64> = (0..3).map(|l| p.get(l, 1)).collect();
        let want = [-2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0];
        for (a, b) in col.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((0..3).all(|l| p.get(l, 0) == 0.0));
    }

    #[test]
    fn flows_of_simple_injections() {
        let p = compute_ptdf::<f64>(&fixtures::two_bus(), "a").unwrap();
        assert_eq!(line_flows(&p, &[0.0, 0.0]).unwrap(), vec![0.0]);
        assert_eq!(line_flows(&p, &[-100.0, 100.0]).unwrap(), vec![-100.0]);
        assert!(matches!(line_flows(&p, &[1.0]), Err(PtdfError::DimensionMismatch { .. })));
        assert!(matches!(line_flows(&p, &[1.0, 0.0]), Err(PtdfError::Unbalanced(_))));
    }

    #[test]
    fn errors_on_bad_slack_and_islands() {
        let case = fixtures::two_bus();
        assert!(matches!(compute_ptdf::<f64>(&case, "zz"), Err(PtdfError::UnknownSlack(_))));
        let islanded = crate::network::apply_outage(&case, "ab").unwrap().case;
        assert_eq!(compute_ptdf::<f64>(&islanded, "a"), Err(PtdfError::Disconnected));
    }

    #[test]
    fn pjm5_entries_are_bounded_and_slack_column_zero() {
        let case = fixtures::pjm5();
        for slack in ["a", "c", "e"] {
            let p = compute_ptdf::<f64>(&case, slack).unwrap();
            let s = p.slack_index();
            for l in 0..6 {
                assert_eq!(p.get(l, s), 0.0);
                for k in 0..5 {
                    assert!(p.get(l, k).abs() <= 1.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn outage_removes_row() {
        let case = crate::network::apply_outage(&fixtures::pjm5(), "bc").unwrap().case;
        let p = compute_ptdf::<f64>(&case, "a").unwrap();
        assert_eq!(p.values().rows(), 5);
        assert!(p.line_index("bc").is_none());
    }

    #[test]
    fn f32_ptdf_agrees_with_f64() {
        let case = fixtures::pjm5();
        let p64 = compute_ptdf::<f64>(&case, "a").unwrap();
        let p32 = compute_ptdf::<f32>(&case, "a").unwrap();
        for l in 0..6 {
            for k in 0..5 {
                assert!((p64.get(l, k) - p32.get(l, k) as f64).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn csv_has_labels_and_nine_digits() {
        let p = compute_ptdf::<f64>(&fixtures::triangle(), "1").unwrap();
        let csv = p.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("line,1,2,3"));
        assert_eq!(lines.next(), Some("12,0,-0.666666667,-0.333333333"));
    }

    fn balanced(raw: Vec<f64>) -> Vec<f64> {
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        raw.into_iter().map(|x| x - mean).collect()
    }

    proptest! {
        #[test]
        fn flows_do_not_depend_on_slack(raw in prop::collection::vec(-500.0f64..500.0, 5)) {
            let case = fixtures::pjm5();
            let y = balanced(raw);
            let reference = line_flows(&compute_ptdf::<f64>(&case, "a").unwrap(), &y).unwrap();
            for slack in ["b", "c", "d", "e"] {
                let f = line_flows(&compute_ptdf::<f64>(&case, slack).unwrap(), &y).unwrap();
                for (x, z) in f.iter().zip(&reference) {
                    prop_assert!((x - z).abs() <= 1e-9 * (1.0 + z.abs()));
                }
            }
        }

        #[test]
        fn flows_superpose(a in prop::collection::vec(-300.0f64..300.0, 5),
                           b in prop::collection::vec(-300.0f64..300.0, 5)) {
            let p = compute_ptdf::<f64>(&fixtures::pjm5(), "a").unwrap();
            let (ya, yb) = (balanced(a), balanced(b));
            let sum: Vec<f64> = ya.iter().zip(&yb).map(|(x, y)| x + y).collect();
            let fa = line_flows(&p, &ya).unwrap();
            let fb = line_flows(&p, &yb).unwrap();
            let fs = line_flows(&p, &sum).unwrap();
            for l in 0..6 {
                prop_assert!((fs[l] - fa[l] - fb[l]).abs() < 1e-9);
            }
        }
    }
}
