//! Sparse operators and load vectors on box meshes.
//!
//! Everything is written for forms: a reference `k`-form component `dx_σ` maps
//! to a physical component scaled by `Π_{i∈σ} 2/h_i`, and integrals carry the
//! factor `det J = Π h_i/2`. With the fixed component conventions this is the
//! covariant map for 1-forms, the contravariant Piola map for `(n-1)`-forms and
//! the `1/det J` scaling for `n`-forms.

mod bc;
mod sparse;

pub use bc::{apply_bc, BcMode, SparseSystem};
pub use sparse::CsrMatrix;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mesh::{BoxMesh, GlobalDofMap};
use crate::poly::{form_components, gauss_rule, QuadratureRule, MAX_DIM};
use crate::refelem::{coboundary_fit, tabulate, tabulate_derivative, Element, Proxy, Tabulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BilinearForm {
    /// `∫ ⟨ω, η⟩`, any degree.
    Mass,
    /// `∫ ∇u · ∇v`, 0-forms.
    GradGrad,
    /// `∫ curl u · curl v`, 1-forms.
    CurlCurl,
    /// `∫ div u div v`, `(n-1)`-forms.
    DivDiv,
    /// `∫ div σ v` with `σ` an `(n-1)`-form trial and `v` an `n`-form test.
    DivCoupling,
}

/// Affine map of the reference cube onto a cell with sides `h`.
#[derive(Clone, Copy, Debug)]
pub struct PushForward {
    pub n: usize,
    pub h: [f64; MAX_DIM],
}

impl PushForward {
    pub fn new(mesh: &BoxMesh) -> Self {
        Self { n: mesh.n, h: mesh.h }
    }

    pub fn det(&self) -> f64 {
        self.h[..self.n].iter().map(|h| h / 2.0).product()
    }

    /// Physical scale of each `k`-form component.
    pub fn component_scales(&self, k: usize) -> Vec<f64> {
        form_components(self.n, k)
            .iter()
            .map(|s| s.iter().map(|&i| 2.0 / self.h[i]).product())
            .collect()
    }
}

/// Quadrature points per axis for assembling element matrices.
pub fn assembly_points(e: &Element) -> usize {
    (e.r + 2).max(e.max_variable_degree() + 1)
}

/// Quadrature points per axis for error norms.
pub fn error_points(e: &Element) -> usize {
    (e.r + 3).max(e.max_variable_degree() + 2)
}

fn points_of(q: &QuadratureRule) -> Vec<Vec<f64>> {
    q.points.iter().map(|p| p[..q.n].to_vec()).collect()
}

/// Dense cell matrix, rows indexed by test functions.
pub fn local_matrix(form: BilinearForm, test: &Element, trial: &Element, pf: &PushForward) -> Result<DMatrix<f64>> {
    let n = pf.n;
    if test.n != n || trial.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: test.n.max(trial.n),
        });
    }
    // form degree of the integrand and whether each side is differentiated
    let (deg, d_test, d_trial) = match form {
        BilinearForm::Mass => {
            if test.k != trial.k {
                return Err(Error::IncompatibleForm(format!(
                    "mass pairing between {}-forms and {}-forms",
                    test.k, trial.k
                )));
            }
            (test.k, false, false)
        }
        BilinearForm::GradGrad | BilinearForm::CurlCurl | BilinearForm::DivDiv => {
            let (name, need) = match form {
                BilinearForm::GradGrad => ("grad-grad", 0),
                BilinearForm::CurlCurl => ("curl-curl", 1),
                _ => ("div-div", n - 1),
            };
            if test.k != need || trial.k != need || (form == BilinearForm::CurlCurl && n < 2) {
                return Err(Error::IncompatibleForm(format!(
                    "{name} needs {need}-forms, got {}-forms and {}-forms",
                    test.k, trial.k
                )));
            }
            (need + 1, true, true)
        }
        BilinearForm::DivCoupling => {
            if trial.k + 1 != n || test.k != n {
                return Err(Error::IncompatibleForm(format!(
                    "div coupling needs an {}-form trial and an {n}-form test space",
                    n - 1
                )));
            }
            (n, false, true)
        }
    };
    let m = assembly_points(test).max(assembly_points(trial));
    let q = gauss_rule(n, m);
    let pts = points_of(&q);
    let tab = |e: &Element, d: bool| -> Tabulation {
        if d {
            tabulate_derivative(e, &pts)
        } else {
            tabulate(e, &pts, 0)
        }
    };
    let tt = tab(test, d_test);
    let tr = tab(trial, d_trial);
    let scales: Vec<f64> = pf.component_scales(deg).iter().map(|s| s * s).collect();
    let det = pf.det();
    let (nt, nr) = (test.dim(), trial.dim());
    let mut a = DMatrix::zeros(nt, nr);
    for (p, w) in q.weights.iter().enumerate() {
        let wd = w * det;
        for i in 0..nt {
            let u = tt.components(0, p, i);
            for j in 0..nr {
                let v = tr.components(0, p, j);
                let mut s = 0.0;
                for c in 0..scales.len() {
                    s += scales[c] * u[c] * v[c];
                }
                a[(i, j)] += wd * s;
            }
        }
    }
    Ok(a)
}

fn scatter(
    local: &DMatrix<f64>,
    test: &GlobalDofMap,
    trial: &GlobalDofMap,
    ncells: usize,
) -> CsrMatrix {
    let mut t = Vec::with_capacity(ncells * local.nrows() * local.ncols());
    for c in 0..ncells {
        let (ri, rs) = (test.cell_dofs(c), test.cell_signs(c));
        let (ci, cs) = (trial.cell_dofs(c), trial.cell_signs(c));
        for i in 0..local.nrows() {
            for j in 0..local.ncols() {
                let s = (rs[i] * cs[j]) as f64;
                t.push((ri[i], ci[j], s * local[(i, j)]));
            }
        }
    }
    CsrMatrix::from_triplets(test.total, trial.total, t)
}

/// Global matrix of a bilinear form; rows follow `test`, columns `trial`.
pub fn assemble_bilinear(
    mesh: &BoxMesh,
    test: &GlobalDofMap,
    trial: &GlobalDofMap,
    form: BilinearForm,
) -> Result<CsrMatrix> {
    let pf = PushForward::new(mesh);
    // uniform cells share one element matrix
    let local = local_matrix(form, &test.element, &trial.element, &pf)?;
    Ok(scatter(&local, test, trial, mesh.num_cells()))
}

/// Physical form components from vector-proxy values.
pub fn vector_to_form(n: usize, k: usize, proxy: Proxy, v: &[f64]) -> Vec<f64> {
    match (n, k, proxy) {
        (2, 1, Proxy::Div) => vec![-v[1], v[0]],
        (3, 2, _) => vec![v[0], -v[1], v[2]],
        _ => v.to_vec(),
    }
}

/// Vector-proxy values from physical form components.
pub fn form_to_vector(n: usize, k: usize, proxy: Proxy, f: &[f64]) -> Vec<f64> {
    match (n, k, proxy) {
        (2, 1, Proxy::Div) => vec![f[1], -f[0]],
        (3, 2, _) => vec![f[0], -f[1], f[2]],
        _ => f.to_vec(),
    }
}

/// `∫ ⟨f, φ_i⟩` with `f` given by its physical form components.
pub fn assemble_load(mesh: &BoxMesh, map: &GlobalDofMap, f: &dyn Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let e = &map.element;
    let pf = PushForward::new(mesh);
    let q = gauss_rule(mesh.n, assembly_points(e));
    let pts = points_of(&q);
    let t = tabulate(e, &pts, 0);
    let scales = pf.component_scales(e.k);
    let det = pf.det();
    let mut b = vec![0.0; map.total];
    let mut local = vec![0.0; e.dim()];
    for c in 0..mesh.num_cells() {
        local.iter_mut().for_each(|v| *v = 0.0);
        for (p, xi) in pts.iter().enumerate() {
            let x = mesh.map_point(c, xi);
            let fx = f(&x[..mesh.n]);
            let w = q.weights[p] * det;
            for (i, li) in local.iter_mut().enumerate() {
                let u = t.components(0, p, i);
                let s: f64 = (0..scales.len()).map(|k| scales[k] * u[k] * fx[k]).sum();
                *li += w * s;
            }
        }
        for ((&g, &s), v) in map.cell_dofs(c).iter().zip(map.cell_signs(c)).zip(&local) {
            b[g] += s as f64 * v;
        }
    }
    b
}

/// `‖u_h - u‖_{L²}` with `u` given by physical form components.
pub fn l2_error(
    mesh: &BoxMesh,
    map: &GlobalDofMap,
    coefficients: &[f64],
    exact: &dyn Fn(&[f64]) -> Vec<f64>,
) -> Result<f64> {
    if coefficients.len() != map.total {
        return Err(Error::DimensionMismatch {
            expected: map.total,
            found: coefficients.len(),
        });
    }
    let e = &map.element;
    let pf = PushForward::new(mesh);
    let q = gauss_rule(mesh.n, error_points(e));
    let pts = points_of(&q);
    let t = tabulate(e, &pts, 0);
    let scales = pf.component_scales(e.k);
    let det = pf.det();
    let mut sum = 0.0;
    let mut uh = vec![0.0; scales.len()];
    for c in 0..mesh.num_cells() {
        let dofs = map.cell_dofs(c);
        let signs = map.cell_signs(c);
        for (p, xi) in pts.iter().enumerate() {
            uh.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..dofs.len() {
                let a = signs[i] as f64 * coefficients[dofs[i]];
                if a == 0.0 {
                    continue;
                }
                for (k, u) in t.components(0, p, i).iter().enumerate() {
                    uh[k] += a * u;
                }
            }
            let x = mesh.map_point(c, xi);
            let ex = exact(&x[..mesh.n]);
            let d2: f64 = (0..scales.len()).map(|k| (scales[k] * uh[k] - ex[k]).powi(2)).sum();
            sum += q.weights[p] * det * d2;
        }
    }
    Ok(sum.sqrt())
}

/// Saddle-point system for `σ = ∇u`, `div σ = -f` with `u = 0` on the boundary
/// imposed naturally. Unknowns are ordered `(σ, u)`.
pub fn assemble_mixed_poisson(
    mesh: &BoxMesh,
    hdiv: &GlobalDofMap,
    l2: &GlobalDofMap,
    f: &dyn Fn(&[f64]) -> f64,
) -> Result<SparseSystem> {
    let (se, le) = (&hdiv.element, &l2.element);
    if se.k + 1 != mesh.n || le.k != mesh.n || se.family != le.family || le.r != se.r {
        return Err(Error::IncompatibleForm(format!(
            "mixed pairing needs an H(div) element of order r with the L² element of order r-1 \
             (SminusDiv with DPC, RTCF/NCF with DQ); got {} and {}",
            se.label(),
            le.label()
        )));
    }
    let m = assemble_bilinear(mesh, hdiv, hdiv, BilinearForm::Mass)?;
    let b = assemble_bilinear(mesh, l2, hdiv, BilinearForm::DivCoupling)?;
    let bt = b.transpose();
    let matrix = CsrMatrix::block2(&m, Some(&bt), Some(&b), None, l2.total);
    let g = assemble_load(mesh, l2, &|x| vec![-f(x)]);
    let mut rhs = vec![0.0; hdiv.total];
    rhs.extend(g);
    Ok(SparseSystem::unconstrained(matrix, rhs))
}

/// `∫_∂Ω g τ_i·n` for an H(div) space, with `n` the outward normal. This is
/// the load from Dirichlet data `u = g` in the mixed formulation.
pub fn assemble_boundary_flux(mesh: &BoxMesh, hdiv: &GlobalDofMap, g: &dyn Fn(&[f64]) -> f64) -> Result<Vec<f64>> {
    let e = &hdiv.element;
    let n = mesh.n;
    if e.k + 1 != n {
        return Err(Error::IncompatibleForm(format!(
            "normal flux needs an (n-1)-form space, got {}",
            e.label()
        )));
    }
    let pf = PushForward::new(mesh);
    let scales = pf.component_scales(e.k);
    let q = gauss_rule(n - 1, assembly_points(e));
    let mut b = vec![0.0; hdiv.total];
    for axis in 0..n {
        let measure: f64 = (0..n).filter(|&i| i != axis).map(|i| mesh.h[i] / 2.0).product();
        for sign in [-1.0f64, 1.0] {
            let pts: Vec<Vec<f64>> = q
                .points
                .iter()
                .map(|p| {
                    let mut x = p[..n - 1].to_vec();
                    x.insert(axis, sign);
                    x
                })
                .collect();
            let t = tabulate(e, &pts, 0);
            let layer = if sign < 0.0 { 0 } else { mesh.divisions[axis] - 1 };
            for c in 0..mesh.num_cells() {
                if mesh.cell_index(c)[axis] != layer {
                    continue;
                }
                let (dofs, signs) = (hdiv.cell_dofs(c), hdiv.cell_signs(c));
                for (p, xi) in pts.iter().enumerate() {
                    let x = mesh.map_point(c, xi);
                    let w = q.weights[p] * measure * g(&x[..n]);
                    for i in 0..dofs.len() {
                        let comps: Vec<f64> = t.components(0, p, i).iter().zip(&scales).map(|(u, s)| u * s).collect();
                        let v = form_to_vector(n, e.k, Proxy::Div, &comps);
                        b[dofs[i]] += signs[i] as f64 * w * sign * v[axis];
                    }
                }
            }
        }
    }
    Ok(b)
}

/// Stored nonzeros of a system matrix after dropping entries below `1e-14`,
/// and their fraction of all `nrows * ncols` entries.
pub fn nonzero_count(sys: &SparseSystem) -> (usize, f64) {
    sys.matrix.nonzero_count(1e-14)
}

/// Global matrix of `d` from the `k`-form space of `from` into the
/// `(k+1)`-form space of `to`: column `j` holds the coefficients of `dφ_j`.
pub fn assemble_coboundary(mesh: &BoxMesh, from: &GlobalDofMap, to: &GlobalDofMap) -> Result<CsrMatrix> {
    let fit = coboundary_fit(&from.element, &to.element)?;
    if fit.residual > 1e-8 {
        return Err(Error::IncompatibleForm(format!(
            "d maps {} outside {} (residual {:.2e})",
            from.element.label(),
            to.element.label(),
            fit.residual
        )));
    }
    let mut t = Vec::new();
    for c in 0..mesh.num_cells() {
        let (fd, fs) = (from.cell_dofs(c), from.cell_signs(c));
        let (td, ts) = (to.cell_dofs(c), to.cell_signs(c));
        for i in 0..fd.len() {
            for j in 0..td.len() {
                let v = fit.matrix[(i, j)];
                if v.abs() > 1e-12 {
                    t.push((td[j], fd[i], (fs[i] * ts[j]) as f64 * v));
                }
            }
        }
    }
    // shared entities see the same entry from every adjacent cell; keep one
    t.sort_unstable_by_key(|&(r, c, _)| (r, c));
    t.dedup_by_key(|e| (e.0, e.1));
    Ok(CsrMatrix::from_triplets(to.total, from.total, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::global_numbering;
    use crate::refelem::{build_element, Family};

    #[test]
    fn single_cell_vertex_mass() {
        let mesh = BoxMesh::uniform(3, 1).unwrap();
        let e = build_element(Family::TrimmedSerendipity, 3, 0, 1).unwrap();
        let map = global_numbering(&mesh, &e).unwrap();
        let m = assemble_bilinear(&mesh, &map, &map, BilinearForm::Mass).unwrap();
        assert_eq!(m.nnz(), 64);
        for d in m.diagonal() {
            assert!((d - 1.0 / 27.0).abs() < 1e-15);
        }
    }

    #[test]
    fn stiffness_kills_constants() {
        let mesh = BoxMesh::uniform(2, 3).unwrap();
        for fam in [Family::TrimmedSerendipity, Family::TensorProduct] {
            for r in 1..=3 {
                let e = build_element(fam, 2, 0, r).unwrap();
                let map = global_numbering(&mesh, &e).unwrap();
                let a = assemble_bilinear(&mesh, &map, &map, BilinearForm::GradGrad).unwrap();
                let m = assemble_bilinear(&mesh, &map, &map, BilinearForm::Mass).unwrap();
                // coefficients of the constant 1 by L² projection
                let b = nalgebra::DVector::from_vec(assemble_load(&mesh, &map, &|_| vec![1.0]));
                let c = m.to_dense().cholesky().unwrap().solve(&b);
                let ac = a.mul_vec(c.as_slice());
                assert!(ac.iter().all(|v| v.abs() < 1e-11), "{fam:?} r={r}");
                if r == 1 {
                    for i in 0..a.nrows {
                        assert!(a.row(i).1.iter().sum::<f64>().abs() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn curl_curl_rejects_zero_forms() {
        let mesh = BoxMesh::uniform(3, 1).unwrap();
        let e = build_element(Family::TrimmedSerendipity, 3, 0, 1).unwrap();
        let map = global_numbering(&mesh, &e).unwrap();
        assert!(matches!(
            assemble_bilinear(&mesh, &map, &map, BilinearForm::CurlCurl),
            Err(Error::IncompatibleForm(_))
        ));
    }
}
