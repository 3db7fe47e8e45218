use super::element::Element;
use crate::poly::{FloatPolynomial, PolyForm};

/// Basis values (and optionally first partial derivatives) at a point set.
///
/// Table `0` holds values, table `1 + a` the derivative along axis `a`.
#[derive(Clone, Debug)]
pub struct Tabulation {
    pub npoints: usize,
    pub nbasis: usize,
    pub ncomp: usize,
    pub ntables: usize,
    values: Vec<f64>,
}

impl Tabulation {
    #[inline]
    pub fn get(&self, table: usize, point: usize, basis: usize, comp: usize) -> f64 {
        self.values[((table * self.npoints + point) * self.nbasis + basis) * self.ncomp + comp]
    }

    /// All components of one basis function at one point.
    #[inline]
    pub fn components(&self, table: usize, point: usize, basis: usize) -> &[f64] {
        let start = ((table * self.npoints + point) * self.nbasis + basis) * self.ncomp;
        &self.values[start..start + self.ncomp]
    }
}

fn power_table(n: usize, x: &[f64], max: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|a| {
            let mut t = Vec::with_capacity(max + 1);
            let mut v = 1.0;
            for _ in 0..=max {
                t.push(v);
                v *= x[a];
            }
            t
        })
        .collect()
}

/// Tabulates arbitrary forms of a common degree.
pub fn tabulate_forms(forms: &[PolyForm], n: usize, points: &[Vec<f64>], deriv_order: usize) -> Tabulation {
    assert!(deriv_order <= 1, "only first derivatives are tabulated");
    let ncomp = forms.first().map_or(0, |f| f.components().len());
    let ntables = if deriv_order == 1 { 1 + n } else { 1 };
    // float copies: [table][basis][comp]
    let mut polys: Vec<Vec<Vec<FloatPolynomial>>> = vec![forms.iter().map(PolyForm::to_float).collect()];
    if deriv_order == 1 {
        for a in 0..n {
            polys.push(
                forms
                    .iter()
                    .map(|f| f.components().iter().map(|c| c.derivative(a).to_float()).collect())
                    .collect(),
            );
        }
    }
    let max = forms.iter().map(PolyForm::max_variable_degree).max().unwrap_or(0);
    let mut values = vec![0.0; ntables * points.len() * forms.len() * ncomp];
    let mut idx = 0;
    for table in &polys {
        for p in points {
            let pw = power_table(n, p, max);
            for basis in table {
                for comp in basis {
                    values[idx] = comp.eval_with_powers(&pw);
                    idx += 1;
                }
            }
        }
    }
    Tabulation {
        npoints: points.len(),
        nbasis: forms.len(),
        ncomp,
        ntables,
        values,
    }
}

/// Tabulates the element basis.
pub fn tabulate(e: &Element, points: &[Vec<f64>], deriv_order: usize) -> Tabulation {
    tabulate_forms(e.basis(), e.n, points, deriv_order)
}

/// Tabulates the exterior derivatives of the element basis.
pub fn tabulate_derivative(e: &Element, points: &[Vec<f64>]) -> Tabulation {
    tabulate_forms(e.d_basis(), e.n, points, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refelem::{build_element, Family};

    #[test]
    fn edge_function_values() {
        let e = build_element(Family::TrimmedSerendipity, 3, 1, 2).unwrap();
        // canonical edge y = z = +1 carries (y+1)(z+1)dx first
        let b = e.entity_range(1, 3).start;
        let t = tabulate(&e, &[vec![0.0, 0.0, 0.0], vec![0.3, -1.0, 0.2]], 0);
        assert_eq!(t.components(0, 0, b), &[1.0, 0.0, 0.0]);
        assert!(t.components(0, 1, b).iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn vertex_functions_partition_unity() {
        let e = build_element(Family::TrimmedSerendipity, 3, 0, 1).unwrap();
        let pts = vec![vec![0.1, -0.7, 0.4], vec![1.0, 1.0, -1.0]];
        let t = tabulate(&e, &pts, 0);
        for p in 0..pts.len() {
            let s: f64 = (0..e.dim()).map(|b| t.get(0, p, b, 0)).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }
}
