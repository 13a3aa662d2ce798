//! Exact layered solver for the tropical critical point on the quiver, ideal
//! fillings, parabolic chain decompositions and the FFL polytope check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use tropflag_arith::Rational;

use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::weights::{lambda_p, DominantWeight, ParabolicType};

/// Largest `n` accepted by the layered solver.
pub const MAX_SOLVER_N: usize = 8;

/// One step of the layered construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub kappa: Rational,
    /// Vertices first reached in this layer.
    pub vertices: Vec<usize>,
    /// Arrows frozen in this layer.
    pub arrows: Vec<usize>,
}

/// Valuations `delta_v` of the vertices and `sigma_a` of the arrows.
#[derive(Clone, Debug)]
pub struct TropicalPoint {
    pub quiver: Quiver,
    pub lambda: DominantWeight,
    pub delta: Vec<Rational>,
    pub sigma: Vec<Rational>,
    /// Empty unless produced by [`solve_tropical`].
    pub layers: Vec<Layer>,
}

impl TropicalPoint {
    pub fn n(&self) -> usize {
        self.quiver.n()
    }

    /// `pi(v)`, the minimum of `sigma` over arrows into `v`.
    pub fn pi(&self, v: usize) -> Rational {
        self.quiver.incoming(v).iter().map(|&a| self.sigma[a].clone()).min().expect("vertex without incoming arrows")
    }

    pub fn min_out(&self, v: usize) -> Rational {
        self.quiver.outgoing(v).iter().map(|&a| self.sigma[a].clone()).min().expect("vertex without outgoing arrows")
    }

    pub fn sigma_by_label(&self, label: &str) -> Option<&Rational> {
        self.quiver.arrow_by_label(label).map(|a| &self.sigma[a])
    }

    /// Common denominator of all vertex and arrow values.
    pub fn grid_denominator(&self) -> u32 {
        let m = Rational::lcm_denominators(self.delta.iter().chain(&self.sigma));
        m.try_into().expect("grid denominator overflows u32")
    }

    /// Checks `sigma = delta_h - delta_t`, the stars against the lift up to a
    /// common shift, and min-in = min-out at every bullet.
    pub fn verify(&self) -> Result<()> {
        let q = &self.quiver;
        for (k, a) in q.arrows().iter().enumerate() {
            if self.sigma[k] != &self.delta[a.head] - &self.delta[a.tail] {
                return Err(Error::Internal(format!("arrow {} inconsistent with vertex values", a.label)));
            }
        }
        let stars = q.stars();
        let shift = &self.delta[stars[0]] - &self.lambda.lift()[0];
        for (i, &s) in stars.iter().enumerate() {
            if self.delta[s] != &self.lambda.lift()[i] + &shift {
                return Err(Error::Internal(format!("star {} does not match the weight", q.vertex_name(s))));
            }
        }
        for v in q.bullets() {
            if self.pi(v) != self.min_out(v) {
                return Err(Error::Internal(format!("critical condition fails at {}", q.vertex_name(v))));
            }
        }
        Ok(())
    }

    pub fn report(&self) -> TropicalReport {
        let q = &self.quiver;
        TropicalReport {
            n: self.n(),
            lambda: self.lambda.lift().to_vec(),
            delta: (0..q.num_vertices()).map(|v| (q.vertex_name(v), self.delta[v].clone())).collect(),
            sigma: q.arrows().iter().enumerate().map(|(k, a)| (a.label.clone(), self.sigma[k].clone())).collect(),
            layers: self.layers.iter().map(|l| l.kappa.clone()).collect(),
        }
    }

    /// Human-readable table of arrow values.
    pub fn sigma_table(&self) -> String {
        let q = &self.quiver;
        let mut s = String::new();
        for (k, a) in q.arrows().iter().enumerate() {
            s.push_str(&format!(
                "{:>6}  {} -> {}  {}\n",
                a.label,
                q.vertex_name(a.tail),
                q.vertex_name(a.head),
                self.sigma[k]
            ));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TropicalReport {
    pub n: usize,
    pub lambda: Vec<Rational>,
    pub delta: BTreeMap<String, Rational>,
    pub sigma: BTreeMap<String, Rational>,
    pub layers: Vec<Rational>,
}

/// Layered computation of the unique tropical critical point with stars at `lambda`.
pub fn solve_tropical(lambda: &DominantWeight) -> Result<TropicalPoint> {
    let n = lambda.n();
    if n > MAX_SOLVER_N {
        return Err(Error::RankTooLarge { n, max: MAX_SOLVER_N });
    }
    let q = Quiver::new(n);
    let mut delta: Vec<Option<Rational>> = vec![None; q.num_vertices()];
    let mut sigma: Vec<Option<Rational>> = vec![None; q.num_arrows()];
    for (i, s) in q.stars().into_iter().enumerate() {
        delta[s] = Some(lambda.lift()[i].clone());
    }
    let mut resolved: BTreeSet<usize> = q.stars().into_iter().collect();
    let mut frozen: BTreeSet<usize> = BTreeSet::new();
    let mut layers = Vec::new();
    let mut last_kappa: Option<Rational> = None;

    while frozen.len() < q.num_arrows() {
        let paths = q.enumerate_paths(&resolved, &frozen);
        if paths.is_empty() {
            return Err(Error::Internal(format!("layer {} has no admissible paths", layers.len() + 1)));
        }
        let gamma = |p: &crate::quiver::QuiverPath| {
            let ds = delta[p.start()].as_ref().unwrap();
            let de = delta[p.end()].as_ref().unwrap();
            &(de - ds) / &Rational::from_int(p.len() as i64)
        };
        let gammas: Vec<Rational> = paths.iter().map(gamma).collect();
        let kappa = gammas.iter().min().unwrap().clone();
        if let Some(prev) = &last_kappa {
            if &kappa < prev {
                return Err(Error::Internal(format!("layer minimum decreased from {prev} to {kappa}")));
            }
        }
        let mut new_vertices = BTreeSet::new();
        let mut new_arrows = BTreeSet::new();
        for (p, g) in paths.iter().zip(&gammas) {
            if g != &kappa {
                continue;
            }
            let base = delta[p.start()].clone().unwrap();
            for (k, &v) in p.vertices.iter().enumerate().skip(1) {
                let value = &base + &(&kappa * &Rational::from_int(k as i64));
                match &delta[v] {
                    Some(old) if old != &value => {
                        return Err(Error::Internal(format!(
                            "minimizing paths disagree at {}: {old} vs {value}",
                            q.vertex_name(v)
                        )));
                    }
                    Some(_) => {}
                    None => {
                        delta[v] = Some(value);
                        new_vertices.insert(v);
                    }
                }
            }
            for &a in &p.arrows {
                sigma[a] = Some(kappa.clone());
                new_arrows.insert(a);
            }
        }
        if new_arrows.is_empty() {
            return Err(Error::Internal("layer froze no arrows".into()));
        }
        resolved.extend(new_vertices.iter().copied());
        frozen.extend(new_arrows.iter().copied());
        layers.push(Layer {
            kappa: kappa.clone(),
            vertices: new_vertices.into_iter().collect(),
            arrows: new_arrows.into_iter().collect(),
        });
        last_kappa = Some(kappa);
    }

    let delta: Vec<Rational> = delta
        .into_iter()
        .enumerate()
        .map(|(v, d)| d.ok_or_else(|| Error::Internal(format!("vertex {} never resolved", q.vertex_name(v)))))
        .collect::<Result<_>>()?;
    let sigma = sigma.into_iter().map(|s| s.unwrap()).collect();
    let point = TropicalPoint { quiver: q, lambda: lambda.clone(), delta, sigma, layers };
    point.verify()?;
    Ok(point)
}

/// Upper-triangular array `n_ij`, `1 <= i < j <= n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IdealFilling {
    n: usize,
    /// `rows[i-1][j-i-1] = n_ij`.
    rows: Vec<Vec<Rational>>,
}

impl IdealFilling {
    /// Validates nonnegativity and the max-property.
    pub fn new(n: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.len() != n - 1 || rows.iter().enumerate().any(|(i, r)| r.len() != n - 1 - i) {
            return Err(Error::NotIdeal(format!("filling shape does not match n = {n}")));
        }
        let f = IdealFilling { n, rows };
        for i in 1..n {
            for j in i + 1..=n {
                if f.get(i, j).is_negative() {
                    return Err(Error::NotIdeal(format!("n_{i}{j} = {} is negative", f.get(i, j))));
                }
                if j - i >= 2 {
                    let m = f.get(i + 1, j).max(f.get(i, j - 1));
                    if f.get(i, j) != m {
                        return Err(Error::NotIdeal(format!("n_{i}{j} = {} but the max of its neighbours is {m}", f.get(i, j))));
                    }
                }
            }
        }
        Ok(f)
    }

    /// The filling determined by its first diagonal `n_{i,i+1}`.
    pub fn from_first_diagonal(first: &[Rational]) -> Result<Self> {
        let n = first.len() + 1;
        let rows = (1..n)
            .map(|i| (i + 1..=n).map(|j| first[i - 1..j - 1].iter().max().unwrap().clone()).collect())
            .collect();
        Self::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i - 1][j - i - 1]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn first_diagonal(&self) -> Vec<Rational> {
        (1..self.n).map(|i| self.get(i, i + 1).clone()).collect()
    }

    /// Coordinates ordered like [`positive_roots`].
    pub fn root_vector(&self) -> Vec<Rational> {
        positive_roots(self.n).into_iter().map(|(i, j)| self.get(i, j).clone()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_integer())
    }

    /// `sum n_ij (e_i - e_j)` as a zero-sum lift.
    pub fn weight_lift(&self) -> Vec<Rational> {
        (1..=self.n)
            .map(|k| {
                let plus: Rational = (k + 1..=self.n).map(|j| self.get(k, j).clone()).sum();
                let minus: Rational = (1..k).map(|i| self.get(i, k).clone()).sum();
                plus - minus
            })
            .collect()
    }

    pub fn weight(&self) -> Result<DominantWeight> {
        DominantWeight::new(self.weight_lift())
    }
}

impl fmt::Display for IdealFilling {
    /// Upper-triangular box diagram, row `i` listing `n_{i,i+1} ... n_{i,n}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let w = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        let border = format!("+{}", format!("{}+", "-".repeat(w + 2)).repeat(self.n - 1));
        for (i, row) in cells.iter().enumerate() {
            let indent = " ".repeat(i * (w + 3));
            writeln!(f, "{indent}{}", &border[..border.len() - i * (w + 3)])?;
            write!(f, "{indent}|")?;
            for c in row {
                write!(f, " {c:>w$} |")?;
            }
            writeln!(f)?;
        }
        let indent = " ".repeat((self.n - 2) * (w + 3));
        write!(f, "{indent}+{}+", "-".repeat(w + 2))
    }
}

/// `n_ij = pi(v_ji)` read off the tropical critical point.
pub fn ideal_filling(lambda: &DominantWeight) -> Result<IdealFilling> {
    filling_of(&solve_tropical(lambda)?)
}

pub fn filling_of(p: &TropicalPoint) -> Result<IdealFilling> {
    let n = p.n();
    let rows = (1..n)
        .map(|i| (i + 1..=n).map(|j| p.pi(p.quiver.vertex(j, i))).collect())
        .collect();
    IdealFilling::new(n, rows)
}

/// Vertex values from a filling with the zero-sum lift on the stars:
/// `delta(v_ji) = sum_{k>j} n_ik - sum_{k<i} n_kj`.
pub fn filling_to_tropical(f: &IdealFilling) -> Result<TropicalPoint> {
    let n = f.n();
    let q = Quiver::new(n);
    let entry = |a: usize, b: usize| -> Rational {
        if a < b {
            f.get(a, b).clone()
        } else {
            Rational::zero()
        }
    };
    let mut delta = vec![Rational::zero(); q.num_vertices()];
    for j in 1..=n {
        for i in 1..=j {
            let hh: Rational = (j + 1..=n).map(|k| entry(i, k)).sum();
            let hv: Rational = (1..i).map(|k| entry(k, j)).sum();
            delta[q.vertex(j, i)] = hh - hv;
        }
    }
    let lambda = f.weight()?;
    let sigma = q.arrows().iter().map(|a| &delta[a.head] - &delta[a.tail]).collect();
    Ok(TropicalPoint { quiver: q, lambda, delta, sigma, layers: Vec::new() })
}

/// Terms `(P_k, c_k)` with `lambda = sum c_k lambda_{P_k}` and `P_1 < P_2 < ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub terms: Vec<(ParabolicType, Rational)>,
}

impl ChainDecomposition {
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn recombine(&self, n: usize) -> Vec<Rational> {
        let mut lift = vec![Rational::zero(); n];
        for (p, c) in &self.terms {
            for (x, y) in lift.iter_mut().zip(lambda_p(p).lift()) {
                *x += c * y;
            }
        }
        lift
    }
}

impl fmt::Display for ChainDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}*lambda_P[I_P={p}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn chain_decomposition(lambda: &DominantWeight) -> Result<ChainDecomposition> {
    chain_from_filling(&ideal_filling(lambda)?, lambda)
}

/// `I_k = {i : n_{i,i+1} > m_{k-1}}`, `m_k = min_{I_k} n_{i,i+1}`, `I^{P_k} = I_k`.
pub fn chain_from_filling(f: &IdealFilling, lambda: &DominantWeight) -> Result<ChainDecomposition> {
    let n = f.n();
    let first = f.first_diagonal();
    let mut prev = Rational::zero();
    let mut terms = Vec::new();
    loop {
        let ik: BTreeSet<usize> = (1..n).filter(|&i| first[i - 1] > prev).collect();
        if ik.is_empty() {
            break;
        }
        let m = ik.iter().map(|&i| first[i - 1].clone()).min().unwrap();
        terms.push((ParabolicType::from_complement(n, &ik), &m - &prev));
        prev = m;
    }
    let chain = ChainDecomposition { terms };
    let back = DominantWeight::new(chain.recombine(n))?;
    if !back.same_weight(lambda) {
        return Err(Error::Internal(format!("chain recombines to {back}, expected {lambda}")));
    }
    Ok(chain)
}

/// Integrality of the tropical critical point.
pub fn is_integral(lambda: &DominantWeight) -> Result<bool> {
    Ok(ideal_filling(lambda)?.is_integral())
}

/// Positive roots `e_i - e_j`, `i < j`, as pairs in row order.
pub fn positive_roots(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

/// A Dyck path as a sequence of roots `(i, j)` standing for `e_i - e_j`.
pub type DyckPath = Vec<(usize, usize)>;

/// All Dyck paths: simple endpoints, steps `(i, j) -> (i+1, j)` or `(i, j+1)`.
pub fn dyck_paths(n: usize) -> Vec<DyckPath> {
    fn walk(n: usize, path: &mut DyckPath, out: &mut Vec<DyckPath>) {
        let (i, j) = *path.last().unwrap();
        if j == i + 1 {
            out.push(path.clone());
        }
        if i + 1 < j {
            path.push((i + 1, j));
            walk(n, path, out);
            path.pop();
        }
        if j < n {
            path.push((i, j + 1));
            walk(n, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..n {
        walk(n, &mut vec![(k, k + 1)], &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FflReport {
    pub inside: bool,
    pub violations: Vec<String>,
}

fn root_name(r: (usize, usize)) -> String {
    format!("a{}{}", r.0, r.1)
}

/// Membership of `point` (ordered like [`positive_roots`]) in the FFL polytope of `lambda`.
pub fn ffl_check(lambda: &DominantWeight, point: &[Rational]) -> Result<FflReport> {
    let n = lambda.n();
    let roots = positive_roots(n);
    if point.len() != roots.len() {
        return Err(Error::DimensionMismatch { expected: roots.len(), got: point.len() });
    }
    let coord: BTreeMap<(usize, usize), &Rational> = roots.iter().copied().zip(point).collect();
    let m = lambda.fundamental_coeffs();
    let mut violations = Vec::new();
    for (r, x) in &coord {
        if x.is_negative() {
            violations.push(format!("n_{} = {x} < 0", root_name(*r)));
        }
    }
    for path in dyck_paths(n) {
        let lhs: Rational = path.iter().map(|r| coord[r].clone()).sum();
        let (k, l) = (path[0].0, path.last().unwrap().0);
        let rhs: Rational = m[k - 1..l].iter().cloned().sum();
        if lhs > rhs {
            let names: Vec<String> = path.iter().map(|&r| root_name(r)).collect();
            violations.push(format!("{} = {lhs} > m_{k}+...+m_{l} = {rhs}", names.join("+")));
        }
    }
    Ok(FflReport { inside: violations.is_empty(), violations })
}

/// Number of solutions of the min-in = min-out conditions found by scanning
/// the bullets of the `n = 3` quiver over the grid `(1/m) Z` in the box
/// `[0, l_1 - l_3]`, with stars at the canonical lift. Returns the solutions
/// as scaled integer triples `(m delta_21, m delta_31, m delta_32)`.
pub fn uniqueness_probe_n3(lambda: &DominantWeight, m: i64) -> Result<Vec<[i64; 3]>> {
    if lambda.n() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: lambda.n() });
    }
    let lift = lambda.canonical_lift();
    let scaled: Vec<i64> = lift
        .iter()
        .map(|x| {
            let y = x * &Rational::from_int(m);
            y.to_i64().filter(|_| y.is_integer())
        })
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Invalid(format!("lift {lambda} is not on the grid 1/{m}")))?;
    let (s1, s2, s3) = (scaled[0], scaled[1], scaled[2]);
    let top = s1 - s3;
    let mut found = Vec::new();
    for v21 in 0..=top {
        for v31 in 0..=top {
            for v32 in 0..=top {
                let a = s1 - v21;
                let b = v21 - v31;
                let c = v21 - s2;
                let d = s2 - v32;
                let e = v31 - v32;
                let f = v32 - s3;
                let ok21 = b.min(c) == a;
                let ok31 = e == b;
                let ok32 = f == d.min(e);
                if ok21 && ok31 && ok32 {
                    found.push([v21, v31, v32]);
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropflag_arith::q;

    fn w(l: &[i64]) -> DominantWeight {
        DominantWeight::from_ints(l).unwrap()
    }

    fn sig(p: &TropicalPoint) -> Vec<Rational> {
        p.sigma.clone()
    }

    #[test]
    fn example_750() {
        let p = solve_tropical(&w(&[7, 5, 0])).unwrap();
        let want: Vec<Rational> = [1, 2, 1, 3, 2, 2].iter().map(|&x| Rational::from_int(x)).collect();
        assert_eq!(sig(&p), want);
        let qv = &p.quiver;
        assert_eq!(p.delta[qv.vertex(2, 1)], Rational::from_int(6));
        assert_eq!(p.delta[qv.vertex(3, 1)], Rational::from_int(4));
        assert_eq!(p.delta[qv.vertex(3, 2)], Rational::from_int(2));
        assert_eq!(p.layers.len(), 3);
    }

    #[test]
    fn example_6_3_m2() {
        let p = solve_tropical(&w(&[6, 3, -2])).unwrap();
        let want = vec![q(3, 2), q(13, 6), q(3, 2), q(17, 6), q(13, 6), q(13, 6)];
        assert_eq!(sig(&p), want);
        let f = filling_of(&p).unwrap();
        assert_eq!((f.get(1, 2), f.get(2, 3), f.get(1, 3)), (&q(3, 2), &q(13, 6), &q(13, 6)));
        assert!(!f.is_integral());
        let chain = chain_from_filling(&f, &p.lambda).unwrap();
        assert_eq!(chain.terms.len(), 2);
        assert!(chain.terms[0].0.is_borel());
        assert_eq!(chain.terms[0].1, q(3, 2));
        assert_eq!(chain.terms[1].0.ip().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(chain.terms[1].1, q(2, 3));
    }

    #[test]
    fn zero_and_sl2() {
        let p = solve_tropical(&w(&[0, 0, 0, 0])).unwrap();
        assert!(p.sigma.iter().chain(&p.delta).all(|x| x.is_zero()));
        let p = solve_tropical(&w(&[5, 0])).unwrap();
        assert_eq!(sig(&p), vec![q(5, 2), q(5, 2)]);
        assert!(!is_integral(&w(&[5, 0])).unwrap());
        assert!(is_integral(&w(&[4, 0])).unwrap());
    }

    #[test]
    fn fillings_and_round_trip() {
        let f = ideal_filling(&w(&[2, 0, -2])).unwrap();
        assert!(f.rows().iter().flatten().all(|x| x.is_one()));
        let back = filling_to_tropical(&f).unwrap();
        let stars: Vec<Rational> = back.quiver.stars().iter().map(|&s| back.delta[s].clone()).collect();
        assert_eq!(stars, vec![Rational::from_int(2), Rational::zero(), Rational::from_int(-2)]);

        let lam = w(&[7, 5, 0]);
        let f = ideal_filling(&lam).unwrap();
        assert_eq!(f.root_vector(), vec![q(1, 1), q(2, 1), q(2, 1)]);
        let back = filling_to_tropical(&f).unwrap();
        let solved = solve_tropical(&lam).unwrap();
        let shift = &solved.delta[0] - &back.delta[0];
        for v in 0..back.delta.len() {
            assert_eq!(&back.delta[v] + &shift, solved.delta[v]);
        }
        assert_eq!(filling_of(&back).unwrap(), f);

        let f = ideal_filling(&w(&[6, 3, -2])).unwrap();
        let back = filling_to_tropical(&f).unwrap();
        assert_eq!(back.lambda.lift(), &[q(11, 3), q(2, 3), q(-13, 3)]);
    }

    #[test]
    fn chains() {
        let c = chain_decomposition(&DominantWeight::parse(3, "2w1+5w2").unwrap()).unwrap();
        assert_eq!(c.terms.len(), 2);
        assert!(c.terms[0].0.is_borel() && c.terms[0].1.is_one());
        assert_eq!(c.terms[1].0.ip().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert!(c.terms[1].1.is_one());
        let c = chain_decomposition(&w(&[2, 0, -2])).unwrap();
        assert_eq!(c.terms.len(), 1);
        assert!(chain_decomposition(&w(&[0, 0, 0])).unwrap().terms.is_empty());
    }

    #[test]
    fn dyck() {
        assert_eq!(dyck_paths(2), vec![vec![(1, 2)]]);
        let d3 = dyck_paths(3);
        assert_eq!(d3.len(), 3);
        assert!(d3.contains(&vec![(1, 2), (1, 3), (2, 3)]));
        for p in dyck_paths(5) {
            assert_eq!(p[0].1, p[0].0 + 1);
            let l = p.last().unwrap();
            assert_eq!(l.1, l.0 + 1);
        }
    }

    #[test]
    fn ffl() {
        let lam = w(&[6, 3, -2]);
        let f = ideal_filling(&lam).unwrap();
        assert!(ffl_check(&lam, &f.root_vector()).unwrap().inside);
        let zero = vec![Rational::zero(); 3];
        assert!(ffl_check(&lam, &zero).unwrap().inside);
        let ones = vec![Rational::one(); 3];
        let r = ffl_check(&w(&[0, 0, 0]), &ones).unwrap();
        assert!(!r.inside && !r.violations.is_empty());
        assert!(matches!(ffl_check(&lam, &ones[..2]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn probe_finds_solver_point() {
        let lam = w(&[7, 5, 0]);
        let sols = uniqueness_probe_n3(&lam, 12).unwrap();
        assert_eq!(sols, vec![[72, 48, 24]]);
    }

    #[test]
    fn filling_display() {
        let f = ideal_filling(&w(&[6, 3, -2])).unwrap();
        let s = f.to_string();
        assert!(s.contains("3/2") && s.contains("13/6"));
    }
}
