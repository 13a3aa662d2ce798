//! Puiseux expansion of the totally positive critical point in the quiver
//! chart. Exponents come exactly from the tropical solver; leading constants
//! come from convex layer minimizations and higher coefficients from one
//! positive definite linear solve per layer and order.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use tropflag_arith::{Field, PuiseuxSeries, Rational};

use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::tropsolve::{solve_tropical, TropicalPoint};
use crate::weights::DominantWeight;

pub const DEFAULT_K: usize = 8;
pub const DEFAULT_NEWTON_TOL: f64 = 1e-12;
pub const DEFAULT_NEWTON_ITERS: usize = 200;

/// Minimize `F(d) = sum_a d_{h(a)} / d_{t(a)}` over the unknown vertices.
#[derive(Clone, Debug)]
pub struct LayerProblem {
    /// Unknown vertices, in the order of the returned values.
    pub vertices: Vec<usize>,
    /// Arrows as `(head, tail)` vertex pairs.
    pub arrows: Vec<(usize, usize)>,
    /// Known positive values of the remaining endpoints.
    pub boundary: Vec<(usize, f64)>,
}

struct LogProblem {
    unknown: Vec<Option<usize>>,
    fixed: Vec<f64>,
    arrows: Vec<(usize, usize)>,
    size: usize,
}

impl LogProblem {
    fn new(p: &LayerProblem) -> Result<Self> {
        let top = p
            .vertices
            .iter()
            .copied()
            .chain(p.boundary.iter().map(|b| b.0))
            .chain(p.arrows.iter().flat_map(|&(h, t)| [h, t]))
            .max()
            .map_or(0, |m| m + 1);
        let mut unknown = vec![None; top];
        for (i, &v) in p.vertices.iter().enumerate() {
            unknown[v] = Some(i);
        }
        let mut fixed = vec![f64::NAN; top];
        for &(v, d) in &p.boundary {
            if !(d > 0.0) {
                return Err(Error::Invalid(format!("boundary value {d} at vertex {v} is not positive")));
            }
            fixed[v] = d.ln();
        }
        for &(h, t) in &p.arrows {
            for v in [h, t] {
                if unknown[v].is_none() && fixed[v].is_nan() {
                    return Err(Error::Invalid(format!("vertex {v} is neither unknown nor on the boundary")));
                }
            }
        }
        Ok(LogProblem { unknown, fixed, arrows: p.arrows.clone(), size: p.vertices.len() })
    }

    fn value(&self, m: &[f64], v: usize) -> f64 {
        match self.unknown[v] {
            Some(i) => m[i],
            None => self.fixed[v],
        }
    }

    fn ratios(&self, m: &[f64]) -> Vec<f64> {
        self.arrows.iter().map(|&(h, t)| (self.value(m, h) - self.value(m, t)).exp()).collect()
    }

    fn objective(&self, m: &[f64]) -> f64 {
        self.ratios(m).iter().sum()
    }

    fn gradient(&self, m: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.size];
        for (&(h, t), c) in self.arrows.iter().zip(self.ratios(m)) {
            if let Some(i) = self.unknown[h] {
                g[i] += c;
            }
            if let Some(i) = self.unknown[t] {
                g[i] -= c;
            }
        }
        g
    }

    fn hessian(&self, m: &[f64]) -> DMatrix<f64> {
        let mut hm = DMatrix::zeros(self.size, self.size);
        for (&(h, t), c) in self.arrows.iter().zip(self.ratios(m)) {
            let (ih, it) = (self.unknown[h], self.unknown[t]);
            if let Some(i) = ih {
                hm[(i, i)] += c;
            }
            if let Some(j) = it {
                hm[(j, j)] += c;
            }
            if let (Some(i), Some(j)) = (ih, it) {
                hm[(i, j)] -= c;
                hm[(j, i)] -= c;
            }
        }
        hm
    }
}

/// `F` at positive values `d` of the unknowns.
pub fn layer_objective(p: &LayerProblem, d: &[f64]) -> Result<f64> {
    let lp = LogProblem::new(p)?;
    Ok(lp.objective(&d.iter().map(|x| x.ln()).collect::<Vec<_>>()))
}

/// Gradient of `F` with respect to the values `d` of the unknowns.
pub fn layer_gradient(p: &LayerProblem, d: &[f64]) -> Result<Vec<f64>> {
    let lp = LogProblem::new(p)?;
    let g = lp.gradient(&d.iter().map(|x| x.ln()).collect::<Vec<_>>());
    Ok(g.iter().zip(d).map(|(gi, di)| gi / di).collect())
}

/// Damped Newton in logarithmic coordinates, started at the geometric mean of
/// the boundary values.
pub fn solve_layer_minimum(p: &LayerProblem, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let lp = LogProblem::new(p)?;
    if lp.size == 0 {
        return Ok(Vec::new());
    }
    let start = if p.boundary.is_empty() {
        0.0
    } else {
        p.boundary.iter().map(|b| b.1.ln()).sum::<f64>() / p.boundary.len() as f64
    };
    let mut m = vec![start; lp.size];
    for _ in 0..max_iter {
        let g = lp.gradient(&m);
        let f = lp.objective(&m);
        let scale = lp.ratios(&m).into_iter().fold(1.0, f64::max);
        if g.iter().all(|x| x.abs() <= tol * scale) {
            return Ok(m.iter().map(|x| x.exp()).collect());
        }
        let chol = lp
            .hessian(&m)
            .cholesky()
            .ok_or_else(|| Error::Internal("layer Hessian is not positive definite".into()))?;
        let step = chol.solve(&-DVector::from_vec(g));
        let mut alpha = 1.0;
        loop {
            let trial: Vec<f64> = m.iter().zip(step.iter()).map(|(x, s)| x + alpha * s).collect();
            let ft = lp.objective(&trial);
            if ft.is_finite() && ft <= f * (1.0 + 4.0 * f64::EPSILON) {
                m = trial;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-20 {
                return Err(Error::NoConvergence(max_iter));
            }
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// A group of consecutive solver layers sharing the same minimum.
#[derive(Clone, Debug)]
pub struct Block {
    pub kappa: Rational,
    pub vertices: Vec<usize>,
    pub arrows: Vec<usize>,
}

/// Vertex series `x_v = d_v t^{delta_v} (1 + sum_k x[v][k] t^{k/M})`.
#[derive(Clone, Debug)]
pub struct CriticalExpansion {
    pub point: TropicalPoint,
    pub grid: u32,
    pub order: usize,
    pub d: Vec<f64>,
    /// `x[v][0] = 1`.
    pub x: Vec<Vec<f64>>,
    /// Normalized arrow coefficients, `z[a][0] = 1`.
    pub z: Vec<Vec<f64>>,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Copy, Debug)]
pub struct ExpansionOptions {
    pub order: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions { order: DEFAULT_K, tol: DEFAULT_NEWTON_TOL, max_iter: DEFAULT_NEWTON_ITERS }
    }
}

impl CriticalExpansion {
    pub fn quiver(&self) -> &Quiver {
        &self.point.quiver
    }

    pub fn ratio(&self, a: usize) -> f64 {
        let ar = self.quiver().arrow(a);
        self.d[ar.head] / self.d[ar.tail]
    }

    pub fn vertex_series(&self, v: usize) -> PuiseuxSeries {
        let q = self.quiver();
        if q.is_star(v) {
            return PuiseuxSeries::monomial(1.0, &self.point.delta[v]).with_order(self.order);
        }
        let coeffs = self.x[v].iter().map(|c| c * self.d[v]).collect();
        PuiseuxSeries::truncated(self.grid, &self.point.delta[v], coeffs).with_order(self.order)
    }

    pub fn arrow_series(&self, a: usize) -> PuiseuxSeries {
        let c = self.ratio(a);
        let coeffs = self.z[a].iter().map(|z| z * c).collect();
        PuiseuxSeries::truncated(self.grid, &self.point.sigma[a], coeffs).with_order(self.order)
    }

    pub fn arrow_series_by_label(&self, label: &str) -> Option<PuiseuxSeries> {
        self.quiver().arrow_by_label(label).map(|a| self.arrow_series(a))
    }
}

pub fn expand_critical_point(lambda: &DominantWeight, opts: ExpansionOptions) -> Result<CriticalExpansion> {
    expand_point(solve_tropical(lambda)?, opts)
}

fn blocks_of(point: &TropicalPoint) -> Result<Vec<Block>> {
    let q = &point.quiver;
    if point.layers.is_empty() && !q.bullets().is_empty() {
        return Err(Error::Invalid("tropical point carries no layer structure".into()));
    }
    let mut blocks: Vec<Block> = Vec::new();
    for layer in &point.layers {
        match blocks.last_mut() {
            Some(b) if b.kappa == layer.kappa => b.vertices.extend(layer.vertices.iter().copied()),
            _ => blocks.push(Block { kappa: layer.kappa.clone(), vertices: layer.vertices.clone(), arrows: Vec::new() }),
        }
    }
    blocks.retain(|b| !b.vertices.is_empty());
    let mut resolved: BTreeSet<usize> = q.stars().into_iter().collect();
    for b in &mut blocks {
        let members: BTreeSet<usize> = b.vertices.iter().copied().collect();
        let mut arrows = BTreeSet::new();
        for &v in &b.vertices {
            let pv = point.pi(v);
            if pv != b.kappa {
                return Err(Error::Internal(format!("pi({}) = {pv} differs from its layer minimum {}", q.vertex_name(v), b.kappa)));
            }
            for &a in q.incoming(v).iter().chain(q.outgoing(v)) {
                if point.sigma[a] != pv {
                    continue;
                }
                let ar = q.arrow(a);
                let other = if ar.head == v { ar.tail } else { ar.head };
                if !members.contains(&other) && !resolved.contains(&other) {
                    return Err(Error::Internal(format!(
                        "minimal arrow {} leaves the resolved region at {}",
                        ar.label,
                        q.vertex_name(v)
                    )));
                }
                arrows.insert(a);
            }
        }
        b.arrows = arrows.into_iter().collect();
        resolved.extend(members);
    }
    Ok(blocks)
}

/// Expansion of the critical point with the given exponents.
pub fn expand_point(point: TropicalPoint, opts: ExpansionOptions) -> Result<CriticalExpansion> {
    let q = point.quiver.clone();
    let nv = q.num_vertices();
    let na = q.num_arrows();
    let grid = point.grid_denominator();
    let k_max = opts.order;
    let blocks = blocks_of(&point)?;

    let mut d = vec![f64::NAN; nv];
    for s in q.stars() {
        d[s] = 1.0;
    }
    for b in &blocks {
        let problem = LayerProblem {
            vertices: b.vertices.clone(),
            arrows: b.arrows.iter().map(|&a| (q.arrow(a).head, q.arrow(a).tail)).collect(),
            boundary: b
                .arrows
                .iter()
                .flat_map(|&a| [q.arrow(a).head, q.arrow(a).tail])
                .filter(|v| !b.vertices.contains(v))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(|v| (v, d[v]))
                .collect(),
        };
        let values = solve_layer_minimum(&problem, opts.tol, opts.max_iter)?;
        for (&v, val) in b.vertices.iter().zip(values) {
            d[v] = val;
        }
    }

    let gridr = Rational::from_int(grid as i64);
    // shift[a] for the head side and tail side: (sigma_a - pi(v)) * M
    let shift = |a: usize, v: usize| -> usize {
        let s = &(&point.sigma[a] - &point.pi(v)) * &gridr;
        s.to_i64().expect("arrow shift is an integer") as usize
    };
    let bullets = q.bullets();
    let mut shifts_in: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    let mut shifts_out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for &v in &bullets {
        shifts_in[v] = q.incoming(v).iter().map(|&a| (a, shift(a, v))).collect();
        shifts_out[v] = q.outgoing(v).iter().map(|&a| (a, shift(a, v))).collect();
    }
    let c: Vec<f64> = q.arrows().iter().map(|ar| d[ar.head] / d[ar.tail]).collect();

    let mut x: Vec<Vec<f64>> = vec![vec![0.0; k_max + 1]; nv];
    for xv in &mut x {
        xv[0] = 1.0;
    }
    let mut z: Vec<Vec<f64>> = vec![vec![0.0; k_max + 1]; na];
    for za in &mut z {
        za[0] = 1.0;
    }

    let z_at = |x: &[Vec<f64>], z: &[Vec<f64>], a: usize, k: usize| -> f64 {
        if k == 0 {
            return 1.0;
        }
        let ar = q.arrow(a);
        let mut val = x[ar.head][k] - x[ar.tail][k];
        for j in 1..k {
            val -= x[ar.tail][j] * z[a][k - j];
        }
        val
    };
    let coeff = |x: &[Vec<f64>], z: &[Vec<f64>], v: usize, k: usize| -> f64 {
        let mut acc = 0.0;
        for &(a, s) in &shifts_in[v] {
            if s <= k {
                acc += c[a] * z_at(x, z, a, k - s);
            }
        }
        for &(a, s) in &shifts_out[v] {
            if s <= k {
                acc -= c[a] * z_at(x, z, a, k - s);
            }
        }
        acc
    };

    for k in 1..=k_max {
        for b in &blocks {
            let idx = |v: usize| b.vertices.iter().position(|&w| w == v);
            let size = b.vertices.len();
            let rhs = DVector::from_iterator(size, b.vertices.iter().map(|&v| -coeff(&x, &z, v, k)));
            let mut lap = DMatrix::zeros(size, size);
            for &a in &b.arrows {
                let ar = q.arrow(a);
                let (ih, it) = (idx(ar.head), idx(ar.tail));
                if let Some(i) = ih {
                    lap[(i, i)] += c[a];
                }
                if let Some(j) = it {
                    lap[(j, j)] += c[a];
                }
                if let (Some(i), Some(j)) = (ih, it) {
                    lap[(i, j)] -= c[a];
                    lap[(j, i)] -= c[a];
                }
            }
            let chol = lap
                .cholesky()
                .ok_or_else(|| Error::Internal(format!("order {k} linear system is not positive definite")))?;
            let y = chol.solve(&rhs);
            for (i, &v) in b.vertices.iter().enumerate() {
                x[v][k] = y[i];
            }
        }
        for a in 0..na {
            z[a][k] = z_at(&x, &z, a, k);
        }
    }

    Ok(CriticalExpansion { point, grid, order: k_max, d, x, z, blocks })
}

/// Largest coefficient of `crit(v)` at `t^{pi(v) + k/M}`, `k <= K`, over all
/// bullets, with every arrow ratio recomputed by series division.
pub fn residual_report(e: &CriticalExpansion) -> Result<f64> {
    let q = e.quiver();
    let series: Vec<PuiseuxSeries> = (0..q.num_vertices()).map(|v| e.vertex_series(v)).collect();
    let ratios: Vec<PuiseuxSeries> = q
        .arrows()
        .iter()
        .map(|ar| series[ar.head].div(&series[ar.tail]))
        .collect::<std::result::Result<_, _>>()?;
    let step = Rational::new(1, e.grid as i64);
    let mut worst: f64 = 0.0;
    for v in q.bullets() {
        let pv = e.point.pi(v);
        for k in 0..=e.order {
            let exp = &pv + &(&step * &Rational::from_int(k as i64));
            let mut acc = 0.0;
            for (&a, sign) in q.incoming(v).iter().map(|a| (a, 1.0)).chain(q.outgoing(v).iter().map(|a| (a, -1.0))) {
                let c = ratios[a].coeff_at(&exp).ok_or(Error::PrecisionExhausted)?;
                acc += sign * c;
            }
            worst = worst.max(acc.abs());
        }
    }
    Ok(worst)
}

/// `zeta_{i-1} zeta_{i+1} = zeta_i^2` through the truncation order, where
/// `zeta_j` is the product of the vertex series on diagonal `D_j` and
/// `zeta_{n+1} = 1`. Valid for `2 <= i <= n`.
pub fn check_path_identity(e: &CriticalExpansion, i: usize, tol: f64) -> Result<bool> {
    let q = e.quiver();
    let n = q.n();
    if i < 2 || i > n {
        return Err(Error::Invalid(format!("diagonal index {i} outside 2..={n}")));
    }
    let zeta = |j: usize| -> PuiseuxSeries {
        if j == n + 1 {
            return PuiseuxSeries::constant(1.0);
        }
        q.diagonal(j).into_iter().fold(PuiseuxSeries::constant(1.0), |acc, v| acc.mul(&e.vertex_series(v)))
    };
    let lhs = zeta(i - 1).mul(&zeta(i + 1));
    let rhs = zeta(i).mul(&zeta(i));
    let (Ok(vl), Ok(vr)) = (lhs.val(), rhs.val()) else {
        return Ok(false);
    };
    if vl != vr {
        return Ok(false);
    }
    let scale = lhs.coefficients().iter().chain(rhs.coefficients()).fold(1.0f64, |m, c| m.max(c.abs()));
    Ok(lhs.max_coeff_diff(&rhs) <= tol * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropflag_arith::recognize;

    fn w(l: &[i64]) -> DominantWeight {
        DominantWeight::from_ints(l).unwrap()
    }

    fn exact_coeffs(s: &PuiseuxSeries) -> Vec<Rational> {
        s.coefficients().iter().map(|&c| recognize(c, 1024, 1e-9).expect("recognizable")).collect()
    }

    #[test]
    fn chain_subquiver() {
        // u -> v -> w with both ends fixed at 1
        let p = LayerProblem { vertices: vec![1], arrows: vec![(1, 0), (2, 1)], boundary: vec![(0, 1.0), (2, 1.0)] };
        let d = solve_layer_minimum(&p, 1e-12, 200).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-12);
        let p = LayerProblem { vertices: vec![1], arrows: vec![(1, 0), (2, 1)], boundary: vec![(0, 4.0), (2, 1.0)] };
        let d = solve_layer_minimum(&p, 1e-12, 200).unwrap();
        assert!((d[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn example_310() {
        let e = expand_critical_point(&w(&[3, 1, 0]), ExpansionOptions::default()).unwrap();
        assert_eq!(e.grid, 6);
        let half = |k: i64| Rational::new(k, 2);
        let q8 = |a: i64, b: i64| Rational::new(a, b);
        let z = Rational::zero();
        let b = exact_coeffs(&e.arrow_series_by_label("b").unwrap());
        assert_eq!(
            b,
            vec![q8(1, 1), z.clone(), -half(1), z.clone(), q8(3, 8), z.clone(), q8(-5, 16), z.clone(), q8(35, 128)]
        );
        let f = exact_coeffs(&e.arrow_series_by_label("f").unwrap());
        assert_eq!(&f[..5], &[q8(1, 1), z.clone(), half(1), z.clone(), q8(-1, 8)]);
        let c = exact_coeffs(&e.arrow_series_by_label("c").unwrap());
        assert_eq!(&c[..5], &[q8(1, 1), z.clone(), -half(1), z.clone(), q8(3, 8)]);
        assert_eq!(e.point.sigma_by_label("b").unwrap(), &q8(5, 6));
        assert!(residual_report(&e).unwrap() < 1e-9);
        assert!(check_path_identity(&e, 2, 1e-9).unwrap());
        assert!(check_path_identity(&e, 3, 1e-9).unwrap());
    }

    #[test]
    fn sl2_is_exact() {
        let e = expand_critical_point(&w(&[4, 0]), ExpansionOptions::default()).unwrap();
        for a in 0..2 {
            let s = e.arrow_series(a);
            assert_eq!(s.val().unwrap(), Rational::from_int(2));
            assert_eq!(s.coefficients()[0], 1.0);
            assert!(s.coefficients()[1..].iter().all(|&c| c == 0.0));
        }
        assert!(check_path_identity(&e, 2, 1e-12).unwrap());
    }

    #[test]
    fn zero_weight_is_constant() {
        // Constant series, but the leading constants solve the balance
        // conditions (b + c = a at v21 etc.) and are not all 1.
        let e = expand_critical_point(&w(&[0, 0, 0]), ExpansionOptions::default()).unwrap();
        assert!(e.point.delta.iter().all(|x| x.is_zero()));
        assert!(e.x.iter().all(|xv| xv[1..].iter().all(|&c| c == 0.0)));
        assert!(residual_report(&e).unwrap() < 1e-14);
        let a = |l: &str| e.ratio(e.quiver().arrow_by_label(l).unwrap());
        assert!((a("b") + a("c") - a("a")).abs() < 1e-14);
    }

    #[test]
    fn perturbation_is_detected() {
        let mut e = expand_critical_point(&w(&[3, 1, 0]), ExpansionOptions::default()).unwrap();
        let v = e.quiver().vertex(2, 1);
        e.x[v][2] += 1e-3;
        assert!(residual_report(&e).unwrap() >= 1e-4);
        assert!(!check_path_identity(&e, 2, 1e-9).unwrap());
    }
}
