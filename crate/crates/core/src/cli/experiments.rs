use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use super::report::{cluster, convergence_rate, fill_rates, ExperimentRow};
use crate::assemble::{
    apply_bc, assemble_bilinear, assemble_boundary_flux, assemble_coboundary, assemble_load, assemble_mixed_poisson,
    l2_error, vector_to_form, BcMode, BilinearForm, CsrMatrix, SparseSystem,
};
use crate::error::{Error, Result};
use crate::mesh::{boundary_dofs, global_numbering, BoxMesh, GlobalDofMap, TraceKind};
use crate::refelem::{build_element, Element, ElementName, ElementSpec, Family};
use crate::solve::{eig_shift_invert_with, solve_saddle, solve_spd, EigenOptions, DEFAULT_EIGEN_TOL, DEFAULT_LINEAR_TOL};

/// Settings shared by the source-problem studies.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub bc_mode: BcMode,
    pub tol: f64,
    /// Timed runs per level; the minimum is reported.
    pub repeats: usize,
    pub warmup: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            bc_mode: BcMode::DiagOne,
            tol: DEFAULT_LINEAR_TOL,
            repeats: 3,
            warmup: true,
        }
    }
}

impl RunConfig {
    /// A single untimed-protocol run per level.
    pub fn single() -> Self {
        Self {
            repeats: 1,
            warmup: false,
            ..Self::default()
        }
    }
}

pub type Field<'a> = dyn Fn(&[f64]) -> Vec<f64> + 'a;
pub type Scalar<'a> = dyn Fn(&[f64]) -> f64 + 'a;

/// `Π sin(π x_i)`.
pub fn sine_product(x: &[f64]) -> f64 {
    x.iter().map(|&xi| (PI * xi).sin()).product()
}

/// Gradient of [`sine_product`].
pub fn sine_product_gradient(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|a| {
            x.iter()
                .enumerate()
                .map(|(i, &xi)| if i == a { PI * (PI * xi).cos() } else { (PI * xi).sin() })
                .product()
        })
        .collect()
}

struct LevelOutcome {
    dofs: usize,
    error: f64,
    assembly: f64,
    solve: f64,
}

fn timed(cfg: &RunConfig, mut run: impl FnMut() -> Result<LevelOutcome>) -> Result<LevelOutcome> {
    if cfg.warmup {
        run()?;
    }
    let mut best = run()?;
    for _ in 1..cfg.repeats.max(1) {
        let o = run()?;
        best.assembly = best.assembly.min(o.assembly);
        best.solve = best.solve.min(o.solve);
    }
    Ok(best)
}

fn rows_from(levels: &[usize], outcomes: Vec<LevelOutcome>) -> Vec<ExperimentRow> {
    let mut rows: Vec<ExperimentRow> = levels
        .iter()
        .zip(outcomes)
        .map(|(&n, o)| ExperimentRow {
            h: 1.0 / n as f64,
            dofs: o.dofs,
            error: o.error,
            time: o.assembly + o.solve,
            rate: None,
            assembly_time: o.assembly,
            solve_time: o.solve,
        })
        .collect();
    fill_rates(&mut rows);
    rows
}

fn resolve(name: ElementName, n: usize, order: usize) -> Result<(ElementSpec, std::sync::Arc<Element>)> {
    let spec = name.resolve(n, order).map_err(Error::at("element construction"))?;
    let e = spec.build().map_err(Error::at("element construction"))?;
    Ok((spec, e))
}

fn setup(n: usize, level: usize, e: &std::sync::Arc<Element>) -> Result<(BoxMesh, GlobalDofMap)> {
    let mesh = BoxMesh::uniform(n, level).map_err(Error::at("mesh"))?;
    let map = global_numbering(&mesh, e).map_err(Error::at("numbering"))?;
    Ok((mesh, map))
}

/// L² projection of the vector field `g` onto a 1-form space; the error is
/// `‖u_h - g‖`.
pub fn projection_level(n: usize, spec: &ElementSpec, level: usize, g: &Field, cfg: &RunConfig) -> Result<ExperimentRow> {
    let e = spec.build()?;
    let o = projection_outcome(n, spec, &e, level, g, cfg)?;
    Ok(rows_from(&[level], vec![o]).remove(0))
}

fn projection_outcome(
    n: usize,
    spec: &ElementSpec,
    e: &std::sync::Arc<Element>,
    level: usize,
    g: &Field,
    cfg: &RunConfig,
) -> Result<LevelOutcome> {
    if spec.k != 1 {
        return Err(Error::Stage {
            stage: "element construction",
            source: Box::new(Error::IncompatibleForm(format!("projection needs a 1-form element, got {}", e.label()))),
        });
    }
    let form = |x: &[f64]| vector_to_form(n, 1, spec.proxy, &g(x));
    timed(cfg, || {
        let t0 = Instant::now();
        let (mesh, map) = setup(n, level, e)?;
        let m = assemble_bilinear(&mesh, &map, &map, BilinearForm::Mass).map_err(Error::at("assembly"))?;
        let b = assemble_load(&mesh, &map, &form);
        let sys = SparseSystem::unconstrained(m, b);
        let t1 = Instant::now();
        let x = solve_spd(&sys, cfg.tol).map_err(Error::at("solve"))?;
        let t2 = Instant::now();
        let error = l2_error(&mesh, &map, &x, &form).map_err(Error::at("error evaluation"))?;
        Ok(LevelOutcome {
            dofs: map.total,
            error,
            assembly: (t1 - t0).as_secs_f64(),
            solve: (t2 - t1).as_secs_f64(),
        })
    })
}

/// Projection of `g = ∇(Π sin πx_i)` over the given levels.
pub fn run_projection(n: usize, name: ElementName, order: usize, levels: &[usize], cfg: &RunConfig) -> Result<Vec<ExperimentRow>> {
    let (spec, e) = resolve(name, n, order)?;
    let out = levels
        .iter()
        .map(|&l| projection_outcome(n, &spec, &e, l, &sine_product_gradient, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows_from(levels, out))
}

fn poisson_outcome(
    n: usize,
    e: &std::sync::Arc<Element>,
    level: usize,
    f: &Scalar,
    u: &Scalar,
    cfg: &RunConfig,
) -> Result<(LevelOutcome, Vec<f64>, SparseSystem)> {
    if e.k != 0 {
        return Err(Error::Stage {
            stage: "element construction",
            source: Box::new(Error::IncompatibleForm(format!("primal Poisson needs a 0-form element, got {}", e.label()))),
        });
    }
    let mut last = None;
    let o = timed(cfg, || {
        let t0 = Instant::now();
        let (mesh, map) = setup(n, level, e)?;
        let a = assemble_bilinear(&mesh, &map, &map, BilinearForm::GradGrad).map_err(Error::at("assembly"))?;
        let b = assemble_load(&mesh, &map, &|x| vec![f(x)]);
        let bnd = boundary_dofs(&mesh, &map, TraceKind::Full).map_err(Error::at("boundary conditions"))?;
        let sys = apply_bc(&a, &b, &bnd, cfg.bc_mode);
        let t1 = Instant::now();
        let x = solve_spd(&sys, cfg.tol).map_err(Error::at("solve"))?;
        let t2 = Instant::now();
        let error = l2_error(&mesh, &map, &x, &|p| vec![u(p)]).map_err(Error::at("error evaluation"))?;
        last = Some((x, sys));
        Ok(LevelOutcome {
            dofs: map.total,
            error,
            assembly: (t1 - t0).as_secs_f64(),
            solve: (t2 - t1).as_secs_f64(),
        })
    })?;
    let (x, sys) = last.expect("at least one run");
    Ok((o, x, sys))
}

/// `-Δu = f` with `u = 0` on the boundary. Returns the row, the solution in
/// the full numbering and the solved system.
pub fn poisson_level(
    n: usize,
    spec: &ElementSpec,
    level: usize,
    f: &Scalar,
    u: &Scalar,
    cfg: &RunConfig,
) -> Result<(ExperimentRow, Vec<f64>, SparseSystem)> {
    let e = spec.build()?;
    let (o, x, sys) = poisson_outcome(n, &e, level, f, u, cfg)?;
    Ok((rows_from(&[level], vec![o]).remove(0), x, sys))
}

/// Primal Poisson with `u = Π sin(πx_i)` over the given levels.
pub fn run_primal_poisson(n: usize, name: ElementName, order: usize, levels: &[usize], cfg: &RunConfig) -> Result<Vec<ExperimentRow>> {
    let (_, e) = resolve(name, n, order)?;
    let f = |x: &[f64]| n as f64 * PI * PI * sine_product(x);
    let out = levels
        .iter()
        .map(|&l| poisson_outcome(n, &e, l, &f, &sine_product, cfg).map(|t| t.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows_from(levels, out))
}

/// The L² partner of an H(div) element: `DPC` or `DQ` of one order less.
pub fn mixed_pair(name: ElementName, n: usize, order: usize) -> Result<(std::sync::Arc<Element>, std::sync::Arc<Element>)> {
    let (spec, hdiv) = resolve(name, n, order)?;
    if spec.k + 1 != n {
        return Err(Error::Stage {
            stage: "element construction",
            source: Box::new(Error::IncompatibleForm(format!(
                "mixed Poisson needs SminusDiv, RTCF or NCF, got {name}"
            ))),
        });
    }
    let l2 = build_element(spec.family, n, n, spec.r).map_err(Error::at("element construction"))?;
    Ok((hdiv, l2))
}

/// Mixed Poisson `σ = ∇u`, `div σ = -f`, `u = g` on the boundary; the error
/// is `‖u_h - u‖`.
pub fn mixed_level(
    name: ElementName,
    n: usize,
    order: usize,
    level: usize,
    f: &Scalar,
    u: &Scalar,
    boundary: Option<&Scalar>,
    cfg: &RunConfig,
) -> Result<ExperimentRow> {
    let (hdiv, l2) = mixed_pair(name, n, order)?;
    let o = mixed_outcome(n, &hdiv, &l2, level, f, u, boundary, cfg)?;
    Ok(rows_from(&[level], vec![o]).remove(0))
}

#[allow(clippy::too_many_arguments)]
fn mixed_outcome(
    n: usize,
    hdiv: &std::sync::Arc<Element>,
    l2: &std::sync::Arc<Element>,
    level: usize,
    f: &Scalar,
    u: &Scalar,
    boundary: Option<&Scalar>,
    cfg: &RunConfig,
) -> Result<LevelOutcome> {
    timed(cfg, || {
        let t0 = Instant::now();
        let (mesh, smap) = setup(n, level, hdiv)?;
        let umap = global_numbering(&mesh, l2).map_err(Error::at("numbering"))?;
        let mut sys = assemble_mixed_poisson(&mesh, &smap, &umap, f).map_err(Error::at("assembly"))?;
        if let Some(g) = boundary {
            let flux = assemble_boundary_flux(&mesh, &smap, g).map_err(Error::at("assembly"))?;
            sys.rhs.iter_mut().zip(flux).for_each(|(r, v)| *r += v);
        }
        let t1 = Instant::now();
        let (_, uh) = solve_saddle(&sys, smap.total, cfg.tol).map_err(Error::at("solve"))?;
        let t2 = Instant::now();
        let error = l2_error(&mesh, &umap, &uh, &|p| vec![u(p)]).map_err(Error::at("error evaluation"))?;
        Ok(LevelOutcome {
            dofs: smap.total + umap.total,
            error,
            assembly: (t1 - t0).as_secs_f64(),
            solve: (t2 - t1).as_secs_f64(),
        })
    })
}

/// Mixed Poisson with `u = Π sin(πx_i)` over the given levels.
pub fn run_mixed_poisson(n: usize, name: ElementName, order: usize, levels: &[usize], cfg: &RunConfig) -> Result<Vec<ExperimentRow>> {
    let (hdiv, l2) = mixed_pair(name, n, order)?;
    let f = |x: &[f64]| n as f64 * PI * PI * sine_product(x);
    let out = levels
        .iter()
        .map(|&l| mixed_outcome(n, &hdiv, &l2, l, &f, &sine_product, None, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows_from(levels, out))
}

/// Exact cavity eigenvalues `m₁² + m₂² + m₃²` (after division by `π²`) up to
/// `max`, with multiplicities: two modes per triple without zeros and one per
/// triple with a single zero.
pub fn cavity_spectrum(max: u32) -> Vec<(u32, usize)> {
    let bound = (max as f64).sqrt() as u32 + 1;
    let mut out: std::collections::BTreeMap<u32, usize> = Default::default();
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                let zeros = [a, b, c].iter().filter(|&&m| m == 0).count();
                let v = a * a + b * b + c * c;
                if zeros <= 1 && v <= max {
                    *out.entry(v).or_default() += if zeros == 0 { 2 } else { 1 };
                }
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct MaxwellOptions {
    /// In units of `π²`.
    pub target: f64,
    pub nev: usize,
    pub tol: f64,
    pub bc_mode: BcMode,
    pub repeats: usize,
    pub warmup: bool,
}

impl Default for MaxwellOptions {
    fn default() -> Self {
        Self {
            target: 3.0,
            nev: 15,
            tol: DEFAULT_EIGEN_TOL,
            bc_mode: BcMode::Eliminate,
            repeats: 3,
            warmup: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MaxwellLevel {
    pub n: usize,
    pub dofs: usize,
    /// Ascending, divided by `π²`, unit eigenvalues of diag-one mode removed.
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Unit eigenvalues removed in diag-one mode.
    pub spurious: usize,
    pub iterations: usize,
    pub assembly_time: f64,
    pub solve_time: f64,
    pub time_per_iteration: f64,
}

/// One row of the comparison table: a cluster of computed eigenvalues
/// approximating `exact`, tracked across levels by its position in the group.
#[derive(Clone, Debug)]
pub struct MaxwellRow {
    pub exact: u32,
    pub exact_multiplicity: usize,
    pub values: Vec<Option<f64>>,
    pub counts: Vec<Option<usize>>,
    pub rates: Vec<Option<f64>>,
}

#[derive(Clone, Debug)]
pub struct MaxwellReport {
    pub label: String,
    pub levels: Vec<MaxwellLevel>,
    pub rows: Vec<MaxwellRow>,
}

/// Absolute gap within which computed eigenvalues are merged when reporting.
pub const EIGEN_CLUSTER_TOL: f64 = 5e-7;

/// The cavity problem on `[0,1]³` with perfectly conducting walls at one mesh size.
pub fn maxwell_level(family: Family, r: usize, level: usize, opts: &MaxwellOptions) -> Result<MaxwellLevel> {
    let e1 = build_element(family, 3, 1, r).map_err(Error::at("element construction"))?;
    let e0 = build_element(family, 3, 0, r).map_err(Error::at("element construction"))?;
    let run = || -> Result<(MaxwellLevel, f64, f64)> {
        let t0 = Instant::now();
        let mesh = BoxMesh::uniform(3, level).map_err(Error::at("mesh"))?;
        let m1 = global_numbering(&mesh, &e1).map_err(Error::at("numbering"))?;
        let m0 = global_numbering(&mesh, &e0).map_err(Error::at("numbering"))?;
        // on [0,1]³ the spectrum is π² times the integer one
        let a = assemble_bilinear(&mesh, &m1, &m1, BilinearForm::CurlCurl)
            .map_err(Error::at("assembly"))?
            .scale(1.0 / (PI * PI));
        let m = assemble_bilinear(&mesh, &m1, &m1, BilinearForm::Mass).map_err(Error::at("assembly"))?;
        let g = assemble_coboundary(&mesh, &m0, &m1).map_err(Error::at("assembly"))?;
        let b1 = boundary_dofs(&mesh, &m1, TraceKind::Tangential).map_err(Error::at("boundary conditions"))?;
        let b0 = boundary_dofs(&mesh, &m0, TraceKind::Full).map_err(Error::at("boundary conditions"))?;
        let zero = vec![0.0; m1.total];
        let sa = apply_bc(&a, &zero, &b1, opts.bc_mode);
        let sm = apply_bc(&m, &zero, &b1, opts.bc_mode);
        let interior0: Vec<usize> = (0..m0.total).filter(|i| b0.binary_search(i).is_err()).collect();
        // gradients of interior 0-forms span the kernel of curl; in diag-one
        // mode the unit vectors of constrained rows are the eigenvalue-1 modes
        let deflation = match opts.bc_mode {
            BcMode::Eliminate => g.submatrix(sa.free_indices(), &interior0),
            BcMode::DiagOne => {
                let gi = g.submatrix(&(0..m1.total).collect::<Vec<_>>(), &interior0);
                let units = CsrMatrix::from_triplets(
                    m1.total,
                    b1.len(),
                    b1.iter().enumerate().map(|(j, &i)| (i, j, 1.0)).collect(),
                );
                let t = gi
                    .triplets()
                    .chain(units.triplets().map(|(i, j, v)| (i, gi.ncols + j, v)))
                    .collect();
                CsrMatrix::from_triplets(m1.total, gi.ncols + units.ncols, t)
            }
        };
        let t1 = Instant::now();
        let mut eo = EigenOptions::new(opts.target, opts.nev, opts.tol);
        eo.block = eo.block.max(6);
        eo.deflation = Some(deflation);
        let res = eig_shift_invert_with(&sa.matrix, &sm.matrix, &eo).map_err(Error::at("eigensolve"))?;
        let t2 = Instant::now();
        let mut eigenvalues = Vec::new();
        let mut residuals = Vec::new();
        let mut spurious = 0;
        for (&l, &r) in res.eigenvalues.iter().zip(&res.residuals) {
            if opts.bc_mode == BcMode::DiagOne && (l - 1.0).abs() < 1e-8 {
                spurious += 1;
            } else {
                eigenvalues.push(l);
                residuals.push(r);
            }
        }
        let solve = (t2 - t1).as_secs_f64();
        Ok((
            MaxwellLevel {
                n: level,
                dofs: m1.total,
                eigenvalues,
                residuals,
                spurious,
                iterations: res.iterations,
                assembly_time: (t1 - t0).as_secs_f64(),
                solve_time: solve,
                time_per_iteration: solve / res.iterations.max(1) as f64,
            },
            (t1 - t0).as_secs_f64(),
            solve,
        ))
    };
    if opts.warmup {
        run()?;
    }
    let (mut best, _, _) = run()?;
    for _ in 1..opts.repeats.max(1) {
        let (o, a, s) = run()?;
        best.assembly_time = best.assembly_time.min(a);
        if s < best.solve_time {
            best.solve_time = s;
            best.time_per_iteration = o.time_per_iteration;
        }
    }
    Ok(best)
}

/// Groups each level's eigenvalues by nearest exact value and tracks the
/// clusters across levels.
pub fn tabulate_maxwell(label: String, levels: Vec<MaxwellLevel>) -> MaxwellReport {
    let top = levels
        .iter()
        .flat_map(|l| l.eigenvalues.iter().cloned())
        .fold(0.0f64, f64::max);
    let spectrum = cavity_spectrum(top.ceil() as u32 + 4);
    let nearest = |v: f64| {
        spectrum
            .iter()
            .min_by(|a, b| (a.0 as f64 - v).abs().total_cmp(&(b.0 as f64 - v).abs()))
            .copied()
            .unwrap_or((0, 0))
    };
    // per level: exact value -> clusters
    let mut grouped: Vec<std::collections::BTreeMap<u32, Vec<(f64, usize)>>> = Vec::new();
    for l in &levels {
        let mut by_exact: std::collections::BTreeMap<u32, Vec<f64>> = Default::default();
        for &v in &l.eigenvalues {
            by_exact.entry(nearest(v).0).or_default().push(v);
        }
        grouped.push(by_exact.into_iter().map(|(k, vs)| (k, cluster(&vs, EIGEN_CLUSTER_TOL))).collect());
    }
    let mut rows = Vec::new();
    for &(exact, mult) in &spectrum {
        let width = grouped.iter().map(|g| g.get(&exact).map_or(0, |c| c.len())).max().unwrap_or(0);
        for j in 0..width {
            let values: Vec<Option<f64>> = grouped
                .iter()
                .map(|g| g.get(&exact).and_then(|c| c.get(j)).map(|c| c.0))
                .collect();
            let counts = grouped
                .iter()
                .map(|g| g.get(&exact).and_then(|c| c.get(j)).map(|c| c.1))
                .collect();
            let rates = (0..levels.len())
                .map(|i| {
                    if i == 0 {
                        return None;
                    }
                    let (a, b) = (values[i - 1]?, values[i]?);
                    let e = exact as f64;
                    convergence_rate(
                        (a - e).abs(),
                        (b - e).abs(),
                        1.0 / levels[i - 1].n as f64,
                        1.0 / levels[i].n as f64,
                    )
                })
                .collect();
            rows.push(MaxwellRow {
                exact,
                exact_multiplicity: mult,
                values,
                counts,
                rates,
            });
        }
    }
    MaxwellReport { label, levels, rows }
}

/// Cavity eigenvalues near the target for an H(curl) element on `N³` meshes.
pub fn run_maxwell_eig(name: ElementName, order: usize, levels: &[usize], opts: &MaxwellOptions) -> Result<MaxwellReport> {
    let spec = name.resolve(3, order).map_err(Error::at("element construction"))?;
    if spec.k != 1 {
        return Err(Error::Stage {
            stage: "element construction",
            source: Box::new(Error::IncompatibleForm(format!(
                "the cavity problem needs a 3D H(curl) element (SminusCurl or NCE), got {name}"
            ))),
        });
    }
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    let results = sorted
        .iter()
        .map(|&l| maxwell_level(spec.family, spec.r, l, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(tabulate_maxwell(format!("{}{} H(curl)", spec.family, spec.r), results))
}

impl MaxwellReport {
    /// Text table in the layout `Actual (Count) | N = ... (rate)`.
    pub fn format(&self) -> String {
        let mut s = format!("{}\n{:<14}", self.label, "Actual (Count)");
        for l in &self.levels {
            let _ = write!(s, " {:>20}", format!("N = {}", l.n));
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(s, "{:<14}", format!("{} ({})", r.exact, r.exact_multiplicity));
            for i in 0..self.levels.len() {
                let cell = match (r.values[i], r.counts[i]) {
                    (Some(v), Some(c)) => {
                        let rate = r.rates[i].map_or(String::new(), |x| format!(" ({x:.2})"));
                        format!("{v:.6}{rate} x{c}")
                    }
                    _ => "-".to_string(),
                };
                let _ = write!(s, " {cell:>20}");
            }
            s.push('\n');
        }
        let _ = write!(s, "{:<14}", "DOF");
        for l in &self.levels {
            let _ = write!(s, " {:>20}", l.dofs);
        }
        let _ = write!(s, "\n{:<14}", "time/iter (s)");
        for l in &self.levels {
            let _ = write!(s, " {:>20.6}", l.time_per_iteration);
        }
        if self.levels.iter().any(|l| l.spurious > 0) {
            let _ = write!(s, "\n{:<14}", "unit removed");
            for l in &self.levels {
                let _ = write!(s, " {:>20}", l.spurious);
            }
        }
        s.push('\n');
        s
    }
}

/// Global DOF totals of both families for one form degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DofRow {
    pub r: usize,
    pub trimmed: usize,
    pub tensor: usize,
}

/// Global DOFs from per-entity counts times mesh entity counts.
pub fn global_dof_count(mesh: &BoxMesh, e: &Element) -> usize {
    e.entity_dof_counts()
        .iter()
        .enumerate()
        .map(|(d, c)| c * mesh.entity_count(d))
        .sum()
}

pub fn report_dofs(n: usize, k: usize, orders: &[usize], level: usize) -> Result<Vec<DofRow>> {
    let mesh = BoxMesh::uniform(n, level).map_err(Error::at("mesh"))?;
    orders
        .iter()
        .map(|&r| {
            let s = build_element(Family::TrimmedSerendipity, n, k, r).map_err(Error::at("element construction"))?;
            let q = build_element(Family::TensorProduct, n, k, r).map_err(Error::at("element construction"))?;
            Ok(DofRow {
                r,
                trimmed: global_dof_count(&mesh, &s),
                tensor: global_dof_count(&mesh, &q),
            })
        })
        .collect()
}

/// Human-readable listing of an element's basis grouped by entity.
pub fn element_dump(e: &Element) -> String {
    let mut s = format!("{}  dim {}\n", e.label(), e.dim());
    let counts = e.entity_dof_counts();
    let names = ["vertex", "edge", "face", "cell"];
    for (d, c) in counts.iter().enumerate() {
        let name = if d == e.n { "interior" } else { names[d] };
        let _ = writeln!(s, "  per {name}: {c} ({} entities)", e.topology.count(d));
    }
    for (i, f) in e.basis().iter().enumerate() {
        let ent = e.entity_of(i);
        let fixed: Vec<String> = ent
            .fixed
            .iter()
            .map(|&(a, sg)| format!("{}={}", ["x", "y", "z"][a], if sg > 0 { "+1" } else { "-1" }))
            .collect();
        let _ = writeln!(s, "[{i}] dim-{} entity {{{}}}: {f}", ent.dim, fixed.join(", "));
    }
    s
}
