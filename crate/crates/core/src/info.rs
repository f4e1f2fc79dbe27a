//! Finite-alphabet probability containers and information measures.
//!
//! All logarithms are base 2. Entropies are never evaluated by forming a
//! probability close to 0 or 1 and taking its logarithm; instead every
//! entropy is assembled from unnormalized masses, where each term
//! `m * log2(total / m)` is computed as `m * log2(1 + rest / m)` with `rest`
//! summed directly from the other masses. This keeps full relative accuracy
//! when some masses are as small as 1e-300 next to masses of order one.

use std::f64::consts::LN_2;

use crate::error::{check_closed, Error, Result};

/// Information in bits.
pub type Bits = f64;

/// Absolute tolerance on the total mass of a pmf (and on each channel row).
pub const PMF_TOLERANCE: f64 = 1e-12;

/// `m * ln((m + rest) / m)` in nats, with `0 * ln(..) = 0`.
#[inline]
fn surprisal_term(m: f64, rest: f64) -> f64 {
    if m <= 0.0 || rest <= 0.0 {
        return 0.0;
    }
    let r = rest / m;
    if r.is_finite() {
        m * r.ln_1p()
    } else {
        // rest / m overflowed: ln(1 + r) = ln(rest) - ln(m) + ln(1 + m / rest)
        m * (rest.ln() - m.ln() + (m / rest).ln_1p())
    }
}

/// Unnormalized entropy `sum_i m_i * log2(S / m_i)` of a nonnegative mass
/// vector with total `S`. Equals `S * H(m / S)`; zero masses contribute zero.
pub fn weighted_entropy(masses: &[f64]) -> Bits {
    let mut nats = 0.0;
    for (i, &m) in masses.iter().enumerate() {
        if m <= 0.0 {
            continue;
        }
        let rest: f64 = masses
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &v)| v.max(0.0))
            .sum();
        nats += surprisal_term(m, rest);
    }
    nats / LN_2
}

/// `(a + b) * h(a / (a + b))` without forming the ratio. Arguments must be
/// nonnegative; returns 0 when either is zero.
#[inline]
pub fn scaled_binary_entropy(a: f64, b: f64) -> Bits {
    (surprisal_term(a, b) + surprisal_term(b, a)) / LN_2
}

/// Binary entropy `h(theta) = -theta log2 theta - (1 - theta) log2 (1 - theta)`.
pub fn binary_entropy(theta: f64) -> Result<Bits> {
    check_closed("theta", theta, -PMF_TOLERANCE, 1.0 + PMF_TOLERANCE, "[0, 1]")?;
    let t = theta.clamp(0.0, 1.0);
    Ok(scaled_binary_entropy(t, 1.0 - t))
}

/// `h(a / (a + b))`, accurate even when `a / b` is below 1e-200 or above 1e200.
pub fn entropy_of_ratio(a: f64, b: f64) -> Result<Bits> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::domain("a", a, "[0, inf)"));
    }
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::domain("b", b, "[0, inf)"));
    }
    let s = a + b;
    if s <= 0.0 {
        return Err(Error::domain("a + b", s, "(0, inf)"));
    }
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    Ok(scaled_binary_entropy(a, b) / s)
}

fn validate_masses(name: &str, values: &mut [f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::pmf(name, "empty"));
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::pmf(name, format!("entry {i} is not finite ({v})")));
        }
        if v < 0.0 {
            return Err(Error::pmf(name, format!("entry {i} is negative ({v})")));
        }
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > PMF_TOLERANCE {
        return Err(Error::pmf(name, format!("entries sum to {total}, expected 1")));
    }
    if total != 1.0 {
        values.iter_mut().for_each(|v| *v /= total);
    }
    Ok(())
}

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePmf {
    probs: Vec<f64>,
}

impl FinitePmf {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        validate_masses("pmf", &mut probs)?;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::pmf("pmf", "empty"));
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn bernoulli(q: f64) -> Result<Self> {
        check_closed("q", q, 0.0, 1.0, "[0, 1]")?;
        Ok(Self {
            probs: vec![1.0 - q, q],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> Bits {
        weighted_entropy(&self.probs)
    }
}

/// A joint pmf over two finite alphabets, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(rows: usize, cols: usize, mut probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("joint pmf needs nonempty alphabets".into()));
        }
        if probs.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "joint pmf of shape {rows}x{cols} needs {} values, got {}",
                rows * cols,
                probs.len()
            )));
        }
        validate_masses("joint", &mut probs)?;
        Ok(Self { rows, cols, probs })
    }

    /// Joint of `X` (rows) and `Y` (columns) from `p_Y` and `p_{X|Y}`.
    pub fn from_conditional(p_y: &FinitePmf, x_given_y: &Channel) -> Result<Self> {
        if x_given_y.inputs() != p_y.len() {
            return Err(Error::Dimension(format!(
                "channel has {} inputs but marginal has {} symbols",
                x_given_y.inputs(),
                p_y.len()
            )));
        }
        let (rows, cols) = (x_given_y.outputs(), p_y.len());
        let mut probs = vec![0.0; rows * cols];
        for y in 0..cols {
            for x in 0..rows {
                probs[x * cols + y] = p_y.probs()[y] * x_given_y.prob(y, x);
            }
        }
        Self::new(rows, cols, probs)
    }

    /// Doubly symmetric binary source with crossover `p`.
    pub fn dsbs(p: f64) -> Result<Self> {
        check_closed("p", p, 0.0, 1.0, "[0, 1]")?;
        let (same, diff) = ((1.0 - p) / 2.0, p / 2.0);
        Self::new(2, 2, vec![same, diff, diff, same])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.probs[r * self.cols + c]
    }

    pub fn values(&self) -> &[f64] {
        &self.probs
    }

    pub fn row_marginal(&self) -> FinitePmf {
        let probs = self.probs.chunks(self.cols).map(|r| r.iter().sum()).collect();
        FinitePmf { probs }
    }

    pub fn col_marginal(&self) -> FinitePmf {
        let probs = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).sum())
            .collect();
        FinitePmf { probs }
    }

    pub fn transpose(&self) -> Self {
        let mut probs = vec![0.0; self.probs.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                probs[c * self.rows + r] = self.get(r, c);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            probs,
        }
    }

    pub fn to_table(&self) -> JointTable {
        JointTable {
            shape: vec![self.rows, self.cols],
            probs: self.probs.clone(),
        }
    }

    /// Joint over `(row, col, aux)` where `aux` is drawn from `channel`
    /// conditioned on the row symbol.
    pub fn attach_to_rows(&self, channel: &Channel) -> Result<JointTable> {
        if channel.inputs() != self.rows {
            return Err(Error::Dimension(format!(
                "channel has {} inputs but joint has {} rows",
                channel.inputs(),
                self.rows
            )));
        }
        let k = channel.outputs();
        let mut probs = Vec::with_capacity(self.probs.len() * k);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let m = self.get(r, c);
                probs.extend(channel.row(r).iter().map(|w| m * w));
            }
        }
        Ok(JointTable {
            shape: vec![self.rows, self.cols, k],
            probs,
        })
    }
}

/// A row-stochastic matrix; row `i` is the output pmf given input `i`.
/// Multi-variable conditioning tuples are flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    inputs: usize,
    outputs: usize,
    rows: Vec<f64>,
}

impl Channel {
    pub fn new(inputs: usize, outputs: usize, mut rows: Vec<f64>) -> Result<Self> {
        if inputs == 0 || outputs == 0 {
            return Err(Error::Dimension("channel needs nonempty alphabets".into()));
        }
        if rows.len() != inputs * outputs {
            return Err(Error::Dimension(format!(
                "channel of shape {inputs}x{outputs} needs {} values, got {}",
                inputs * outputs,
                rows.len()
            )));
        }
        for (i, row) in rows.chunks_mut(outputs).enumerate() {
            validate_masses(&format!("channel row {i}"), row)?;
        }
        Ok(Self { inputs, outputs, rows })
    }

    /// Maps input `i` to output `i`; extra outputs get no mass.
    pub fn identity(inputs: usize, outputs: usize) -> Result<Self> {
        if outputs < inputs {
            return Err(Error::Dimension("identity channel needs outputs >= inputs".into()));
        }
        let mut rows = vec![0.0; inputs * outputs];
        for i in 0..inputs {
            rows[i * outputs + i] = 1.0;
        }
        Self::new(inputs, outputs, rows)
    }

    /// Binary symmetric channel with crossover `q`.
    pub fn bsc(q: f64) -> Result<Self> {
        check_closed("q", q, 0.0, 1.0, "[0, 1]")?;
        Self::new(2, 2, vec![1.0 - q, q, q, 1.0 - q])
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.outputs..(i + 1) * self.outputs]
    }

    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.rows[input * self.outputs + output]
    }

    pub fn values(&self) -> &[f64] {
        &self.rows
    }
}

/// Per-letter distortion `d(x, x_hat)`; entries may be `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMatrix {
    sources: usize,
    reproductions: usize,
    values: Vec<f64>,
}

/// Index of the erasure symbol in the reproduction alphabet `{0, e, 1}`.
pub const ERASURE: usize = 1;

impl DistortionMatrix {
    pub fn new(sources: usize, reproductions: usize, values: Vec<f64>) -> Result<Self> {
        if sources == 0 || reproductions == 0 {
            return Err(Error::Dimension("distortion matrix needs nonempty alphabets".into()));
        }
        if values.len() != sources * reproductions {
            return Err(Error::Dimension(format!(
                "distortion matrix of shape {sources}x{reproductions} needs {} values, got {}",
                sources * reproductions,
                values.len()
            )));
        }
        for (x, row) in values.chunks(reproductions).enumerate() {
            if let Some(v) = row.iter().find(|v| v.is_nan() || **v < 0.0) {
                return Err(Error::format(
                    "values",
                    format!("distortion row {x} has invalid entry {v}"),
                ));
            }
            if row.iter().all(|v| v.is_infinite()) {
                return Err(Error::format(
                    "values",
                    format!("distortion row {x} has no finite entry"),
                ));
            }
        }
        Ok(Self {
            sources,
            reproductions,
            values,
        })
    }

    /// Binary erasure distortion over reproductions `{0, e, 1}`:
    /// `d(i, i) = 0`, `d(i, e) = 1`, `d(i, 1 - i) = inf`.
    pub fn erasure() -> Self {
        let inf = f64::INFINITY;
        Self {
            sources: 2,
            reproductions: 3,
            values: vec![0.0, 1.0, inf, inf, 1.0, 0.0],
        }
    }

    /// Hamming distortion on an alphabet of size `n`.
    pub fn hamming(n: usize) -> Result<Self> {
        let values = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 1.0 }).collect();
        Self::new(n, n, values)
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    pub fn reproductions(&self) -> usize {
        self.reproductions
    }

    pub fn get(&self, x: usize, x_hat: usize) -> f64 {
        self.values[x * self.reproductions + x_hat]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A joint pmf over any number of finite variables (row-major, last axis
/// fastest). Used for conditional information measures.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn new(shape: Vec<usize>, mut probs: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::Dimension(format!("invalid table shape {shape:?}")));
        }
        let n: usize = shape.iter().product();
        if probs.len() != n {
            return Err(Error::Dimension(format!(
                "table of shape {shape:?} needs {n} values, got {}",
                probs.len()
            )));
        }
        validate_masses("joint", &mut probs)?;
        Ok(Self { shape, probs })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        let flat = index.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i);
        self.probs[flat]
    }

    /// Marginal masses over `axes`, flattened row-major in the given axis order.
    pub fn marginal(&self, axes: &[usize]) -> Vec<f64> {
        let out_len: usize = axes.iter().map(|&a| self.shape[a]).product();
        let mut out = vec![0.0; out_len];
        let mut index = vec![0usize; self.shape.len()];
        for &m in &self.probs {
            let key = axes.iter().fold(0, |acc, &a| acc * self.shape[a] + index[a]);
            out[key] += m;
            for d in (0..index.len()).rev() {
                index[d] += 1;
                if index[d] < self.shape[d] {
                    break;
                }
                index[d] = 0;
            }
        }
        out
    }

    fn check_axes(&self, groups: &[&[usize]]) -> Result<()> {
        let mut seen = vec![false; self.shape.len()];
        for group in groups {
            for &a in group.iter() {
                if a >= self.shape.len() {
                    return Err(Error::Dimension(format!(
                        "axis {a} out of range for a table with {} variables",
                        self.shape.len()
                    )));
                }
                if seen[a] {
                    return Err(Error::Dimension(format!("axis {a} appears twice in the partition")));
                }
                seen[a] = true;
            }
        }
        Ok(())
    }

    /// `H(target | given)`.
    pub fn conditional_entropy(&self, target: &[usize], given: &[usize]) -> Result<Bits> {
        self.check_axes(&[target, given])?;
        let axes: Vec<usize> = given.iter().chain(target).copied().collect();
        let block: usize = target.iter().map(|&a| self.shape[a]).product();
        let masses = self.marginal(&axes);
        Ok(masses.chunks(block).map(weighted_entropy).sum())
    }

    pub fn entropy(&self, axes: &[usize]) -> Result<Bits> {
        self.conditional_entropy(axes, &[])
    }
}

/// `H(row | column)` of a two-variable joint.
pub fn conditional_entropy(joint: &JointPmf) -> Bits {
    (0..joint.cols())
        .map(|c| {
            let column: Vec<f64> = (0..joint.rows()).map(|r| joint.get(r, c)).collect();
            weighted_entropy(&column)
        })
        .sum()
}

/// `I(A; B | C) = H(A | C) - H(A | B, C)` for disjoint axis groups of a
/// joint table. `c` may be empty.
pub fn conditional_mutual_information(joint: &JointTable, a: &[usize], b: &[usize], c: &[usize]) -> Result<Bits> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Dimension("mutual information needs nonempty A and B".into()));
    }
    joint.check_axes(&[a, b, c])?;
    let bc: Vec<usize> = b.iter().chain(c).copied().collect();
    let value = joint.conditional_entropy(a, c)? - joint.conditional_entropy(a, &bc)?;
    Ok(value.max(0.0))
}

/// `E[d(X, X_hat)]` for a joint over `(X, X_hat)`. Cells with zero mass are
/// ignored; positive mass on an infinite distortion gives `+inf`.
pub fn expected_distortion(joint: &JointPmf, d: &DistortionMatrix) -> Result<f64> {
    if joint.rows() != d.sources() || joint.cols() != d.reproductions() {
        return Err(Error::Dimension(format!(
            "joint is {}x{} but distortion matrix is {}x{}",
            joint.rows(),
            joint.cols(),
            d.sources(),
            d.reproductions()
        )));
    }
    let mut total = 0.0;
    for x in 0..joint.rows() {
        for x_hat in 0..joint.cols() {
            let m = joint.get(x, x_hat);
            if m > 0.0 {
                total += m * d.get(x, x_hat);
            }
        }
    }
    Ok(total)
}
