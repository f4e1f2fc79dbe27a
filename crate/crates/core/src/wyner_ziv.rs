//! Brute-force solver for the one-message (Wyner-Ziv) rate-distortion
//! function on small alphabets.
//!
//! Every row of the test channel `p_{U|X}` is placed on a simplex grid over
//! `|X| + 1` auxiliary symbols. For a fixed channel the best decoder is a
//! per-cell argmin, so only the channel is searched. Grid points that miss
//! the distortion target are rejected, and the incumbent is polished by
//! rounds of half-step local search.
//!
//! The returned rate is achievable, hence an upper bound on the true rate,
//! and converges to it as the grid is refined.

use crate::error::{Error, Result};
use crate::info::{
    conditional_entropy, conditional_mutual_information, Bits, Channel, DistortionMatrix, JointPmf, JointTable,
};

/// Slack on the distortion constraint.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// Largest `|X| * |Y|` the oracle accepts.
pub const MAX_SOURCE_CELLS: usize = 16;

/// Largest number of initial grid points the oracle will enumerate.
pub const MAX_GRID_POINTS: f64 = 4e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    resolution: u32,
    refine_rounds: u32,
}

impl GridSpec {
    pub fn new(resolution: u32, refine_rounds: u32) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::domain("resolution", resolution as f64, "[2, inf)"));
        }
        Ok(Self {
            resolution,
            refine_rounds,
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn refine_rounds(&self) -> u32 {
        self.refine_rounds
    }
}

/// Decoder table `(u, y) -> x_hat`; `None` for cells of zero probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoder {
    aux: usize,
    side: usize,
    table: Vec<Option<usize>>,
}

impl Decoder {
    pub fn get(&self, u: usize, y: usize) -> Option<usize> {
        self.table[u * self.side + y]
    }

    pub fn aux_size(&self) -> usize {
        self.aux
    }

    pub fn side_size(&self) -> usize {
        self.side
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WzSolution {
    pub rate: Bits,
    pub distortion: f64,
    pub aux_channel: Channel,
    pub decoder: Decoder,
}

/// Best deterministic reproduction for each `(u, y)` of a joint over
/// `(X, Y, U)`: the argmin of the conditional expected distortion, lowest
/// index on ties.
pub fn optimal_decoder(joint_xyu: &JointTable, d: &DistortionMatrix) -> Result<Decoder> {
    let shape = joint_xyu.shape();
    if shape.len() != 3 {
        return Err(Error::Dimension(format!(
            "decoder needs a joint over (X, Y, U), got {} variables",
            shape.len()
        )));
    }
    let (nx, ny, nu) = (shape[0], shape[1], shape[2]);
    if nx != d.sources() {
        return Err(Error::Dimension(format!(
            "joint has |X| = {nx} but distortion matrix has {} rows",
            d.sources()
        )));
    }
    let mut table = vec![None; nu * ny];
    for u in 0..nu {
        for y in 0..ny {
            let mass: f64 = (0..nx).map(|x| joint_xyu.get(&[x, y, u])).sum();
            if mass <= 0.0 {
                continue;
            }
            let cost = |r: usize| {
                (0..nx)
                    .map(|x| {
                        let m = joint_xyu.get(&[x, y, u]);
                        if m > 0.0 {
                            m * d.get(x, r)
                        } else {
                            0.0
                        }
                    })
                    .sum::<f64>()
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..d.reproductions() {
                let c = cost(r);
                if c.is_finite() && best.is_none_or(|(_, b)| c < b) {
                    best = Some((r, c));
                }
            }
            match best {
                Some((r, _)) => table[u * ny + y] = Some(r),
                None => {
                    return Err(Error::Infeasible(format!(
                        "every reproduction has infinite distortion at (u = {u}, y = {y})"
                    )))
                }
            }
        }
    }
    Ok(Decoder {
        aux: nu,
        side: ny,
        table,
    })
}

/// Source, distortion and target shared by every evaluation.
struct Problem {
    nx: usize,
    ny: usize,
    nu: usize,
    nr: usize,
    pxy: Vec<f64>,
    dist: Vec<f64>,
    limit: f64,
}

/// Per-row quantities for one channel row, summed across rows by the search.
struct RowTerms {
    /// `p(x, y) w(u)` at `y * nu + u`.
    mass: Vec<f64>,
    /// Distortion contribution of that mass per reproduction, at `(y * nu + u) * nr + r`.
    cost: Vec<f64>,
    /// `sum m ln m` over the row's cells.
    self_info: f64,
}

impl Problem {
    fn row_terms(&self, x: usize, weights: &[f64]) -> RowTerms {
        let (ny, nu, nr) = (self.ny, self.nu, self.nr);
        let mut mass = vec![0.0; ny * nu];
        let mut cost = vec![0.0; ny * nu * nr];
        let mut self_info = 0.0;
        for y in 0..ny {
            let pxy = self.pxy[x * ny + y];
            for (u, &w) in weights.iter().enumerate() {
                let m = pxy * w;
                let cell = y * nu + u;
                mass[cell] = m;
                if m > 0.0 {
                    self_info += m * m.ln();
                    for r in 0..nr {
                        cost[cell * nr + r] = m * self.dist[x * nr + r];
                    }
                }
            }
        }
        RowTerms { mass, cost, self_info }
    }

    /// `(H(X|U,Y) in nats, distortion)` for the summed row terms, or `None`
    /// when the distortion target is missed.
    fn score(&self, mass: &[f64], cost: &[f64], self_info: f64) -> Option<(f64, f64)> {
        let nr = self.nr;
        let mut distortion = 0.0;
        let mut cell_info = 0.0;
        for (cell, &m) in mass.iter().enumerate() {
            if m <= 0.0 {
                continue;
            }
            let best = cost[cell * nr..(cell + 1) * nr]
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b));
            distortion += best;
            if !(distortion <= self.limit) {
                return None;
            }
            cell_info += m * m.ln();
        }
        Some((cell_info - self_info, distortion))
    }

    fn evaluate(&self, channel: &[Vec<f64>]) -> Option<(f64, f64)> {
        let cells = self.ny * self.nu;
        let mut mass = vec![0.0; cells];
        let mut cost = vec![0.0; cells * self.nr];
        let mut self_info = 0.0;
        for (x, weights) in channel.iter().enumerate() {
            let t = self.row_terms(x, weights);
            mass.iter_mut().zip(&t.mass).for_each(|(a, b)| *a += b);
            cost.iter_mut().zip(&t.cost).for_each(|(a, b)| *a += b);
            self_info += t.self_info;
        }
        self.score(&mass, &cost, self_info)
    }
}

/// All compositions of `total` into `parts` nonnegative parts, in
/// lexicographic order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(left - c, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

fn to_weights(counts: &[u32], resolution: u32) -> Vec<f64> {
    counts.iter().map(|&c| c as f64 / resolution as f64).collect()
}

/// Incumbent of the search: larger `h_nats` (so smaller rate) wins; exact
/// ties keep the lexicographically smaller channel.
#[derive(Clone)]
struct Incumbent {
    h_nats: f64,
    resolution: u32,
    counts: Vec<Vec<u32>>,
}

impl Incumbent {
    fn params(&self) -> Vec<f64> {
        self.counts
            .iter()
            .flat_map(|c| to_weights(c, self.resolution))
            .collect()
    }

    fn beaten_by(&self, h_nats: f64, resolution: u32, counts: &[Vec<u32>]) -> bool {
        if h_nats != self.h_nats {
            return h_nats > self.h_nats;
        }
        let candidate: Vec<f64> = counts.iter().flat_map(|c| to_weights(c, resolution)).collect();
        candidate < self.params()
    }
}

struct GridSearch<'a> {
    problem: &'a Problem,
    options: Vec<Vec<RowTerms>>,
    rows: Vec<Vec<Vec<u32>>>,
    best: Option<(f64, Vec<usize>)>,
}

impl GridSearch<'_> {
    fn run(&mut self, depth: usize, mass: &[f64], cost: &[f64], self_info: f64, chosen: &mut Vec<usize>) {
        let last = depth + 1 == self.rows.len();
        let mut m = mass.to_vec();
        let mut c = cost.to_vec();
        for k in 0..self.options[depth].len() {
            let t = &self.options[depth][k];
            m.iter_mut()
                .zip(mass.iter().zip(&t.mass))
                .for_each(|(a, (b, d))| *a = b + d);
            c.iter_mut()
                .zip(cost.iter().zip(&t.cost))
                .for_each(|(a, (b, d))| *a = b + d);
            let s = self_info + t.self_info;
            chosen.push(k);
            if last {
                if let Some((h, _)) = self.problem.score(&m, &c, s) {
                    // Options are enumerated in lexicographic order, so a
                    // strict comparison keeps the smallest channel on ties.
                    if self.best.as_ref().is_none_or(|(b, _)| h > *b) {
                        self.best = Some((h, chosen.clone()));
                    }
                }
            } else {
                self.run(depth + 1, &m, &c, s, chosen);
            }
            chosen.pop();
        }
    }
}

fn validate(p_xy: &JointPmf, d: &DistortionMatrix, target: f64) -> Result<()> {
    if !(target >= 0.0) {
        return Err(Error::domain("D", target, "[0, inf)"));
    }
    if p_xy.rows() != d.sources() {
        return Err(Error::Dimension(format!(
            "joint has |X| = {} but distortion matrix has {} rows",
            p_xy.rows(),
            d.sources()
        )));
    }
    if p_xy.rows() * p_xy.cols() > MAX_SOURCE_CELLS {
        return Err(Error::Dimension(format!(
            "|X| * |Y| = {} exceeds the oracle limit of {MAX_SOURCE_CELLS}",
            p_xy.rows() * p_xy.cols()
        )));
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Minimum of `I(X;U|Y)` over the channel grid subject to
/// `E[d(X, g(U,Y))] <= D`, with `|U| = |X| + 1` and the decoder chosen by
/// [`optimal_decoder`].
pub fn wz_rate_oracle(p_xy: &JointPmf, d: &DistortionMatrix, target: f64, grid: GridSpec) -> Result<WzSolution> {
    validate(p_xy, d, target)?;
    let (nx, ny) = (p_xy.rows(), p_xy.cols());
    let nu = nx + 1;
    let problem = Problem {
        nx,
        ny,
        nu,
        nr: d.reproductions(),
        pxy: p_xy.values().to_vec(),
        dist: d.values().to_vec(),
        limit: target + FEASIBILITY_TOLERANCE,
    };

    let n = grid.resolution();
    let identity: Vec<Vec<u32>> = (0..nx)
        .map(|x| (0..nu).map(|u| if u == x { n } else { 0 }).collect())
        .collect();
    let identity_weights: Vec<Vec<f64>> = identity.iter().map(|c| to_weights(c, n)).collect();
    if problem.evaluate(&identity_weights).is_none() {
        return Err(Error::Infeasible(format!(
            "even a noiseless test channel cannot reach D = {target}"
        )));
    }

    let points = binomial(n as u64 + nu as u64 - 1, nu as u64 - 1).powi(nx as i32);
    if points / 6.0 > MAX_GRID_POINTS {
        return Err(Error::domain(
            "resolution",
            n as f64,
            "small enough for the grid budget",
        ));
    }

    let all = compositions(n, nu);
    // Relabeling U leaves both rate and distortion unchanged, so the first
    // row only needs nonincreasing counts.
    let first: Vec<Vec<u32>> = all
        .iter()
        .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
        .cloned()
        .collect();
    let rows: Vec<Vec<Vec<u32>>> = (0..nx)
        .map(|x| if x == 0 { first.clone() } else { all.clone() })
        .collect();
    let options = rows
        .iter()
        .enumerate()
        .map(|(x, opts)| opts.iter().map(|c| problem.row_terms(x, &to_weights(c, n))).collect())
        .collect();

    let mut search = GridSearch {
        problem: &problem,
        options,
        rows,
        best: None,
    };
    let cells = ny * nu;
    search.run(
        0,
        &vec![0.0; cells],
        &vec![0.0; cells * problem.nr],
        0.0,
        &mut Vec::new(),
    );
    let (h_nats, choice) = search.best.expect("the noiseless channel is on the grid and feasible");
    let mut incumbent = Incumbent {
        h_nats,
        resolution: n,
        counts: choice
            .iter()
            .enumerate()
            .map(|(x, &k)| search.rows[x][k].clone())
            .collect(),
    };

    for _ in 0..grid.refine_rounds() {
        incumbent = refine(&problem, incumbent);
    }

    finish(p_xy, d, target, &incumbent)
}

/// One round of half-step local search in an L-infinity ball of one old step
/// around the incumbent, repeated until the incumbent stops moving.
fn refine(problem: &Problem, incumbent: Incumbent) -> Incumbent {
    let resolution = incumbent.resolution * 2;
    let mut best = Incumbent {
        resolution,
        counts: incumbent
            .counts
            .iter()
            .map(|c| c.iter().map(|v| v * 2).collect())
            .collect(),
        ..incumbent
    };
    let free = problem.nu - 1;
    let offsets: Vec<Vec<i64>> = {
        let mut out = vec![vec![]];
        for _ in 0..free {
            out = out
                .into_iter()
                .flat_map(|o: Vec<i64>| (-2..=2).map(move |s| [o.clone(), vec![s]].concat()))
                .collect();
        }
        out
    };

    for _ in 0..256 {
        let centre = best.counts.clone();
        let per_row: Vec<Vec<Vec<u32>>> = centre
            .iter()
            .map(|row| {
                offsets
                    .iter()
                    .filter_map(|off| {
                        let mut counts = Vec::with_capacity(problem.nu);
                        let mut used: i64 = 0;
                        for (i, o) in off.iter().enumerate() {
                            let v = row[i] as i64 + o;
                            if v < 0 {
                                return None;
                            }
                            used += v;
                            counts.push(v as u32);
                        }
                        let last = resolution as i64 - used;
                        if last < 0 {
                            return None;
                        }
                        counts.push(last as u32);
                        Some(counts)
                    })
                    .collect()
            })
            .collect();

        let mut moved = false;
        let mut index = vec![0usize; problem.nx];
        'outer: loop {
            let counts: Vec<Vec<u32>> = index.iter().enumerate().map(|(x, &k)| per_row[x][k].clone()).collect();
            let weights: Vec<Vec<f64>> = counts.iter().map(|c| to_weights(c, resolution)).collect();
            if let Some((h, _)) = problem.evaluate(&weights) {
                if best.beaten_by(h, resolution, &counts) {
                    best = Incumbent {
                        h_nats: h,
                        resolution,
                        counts,
                    };
                    moved = true;
                }
            }
            for x in (0..problem.nx).rev() {
                index[x] += 1;
                if index[x] < per_row[x].len() {
                    continue 'outer;
                }
                index[x] = 0;
            }
            break;
        }
        if !moved {
            break;
        }
    }
    best
}

fn finish(p_xy: &JointPmf, d: &DistortionMatrix, target: f64, incumbent: &Incumbent) -> Result<WzSolution> {
    let nu = p_xy.rows() + 1;
    let values: Vec<f64> = incumbent.params();
    let aux_channel = Channel::new(p_xy.rows(), nu, values)?;
    let joint = p_xy.attach_to_rows(&aux_channel)?;
    let decoder = optimal_decoder(&joint, d)?;

    let mut distortion = 0.0;
    for x in 0..p_xy.rows() {
        for y in 0..p_xy.cols() {
            for u in 0..nu {
                let m = joint.get(&[x, y, u]);
                if m > 0.0 {
                    let r = decoder.get(u, y).expect("cell has positive mass");
                    distortion += m * d.get(x, r);
                }
            }
        }
    }
    debug_assert!(distortion <= target + 1e-9);
    let rate = conditional_mutual_information(&joint, &[0], &[2], &[1])?;
    Ok(WzSolution {
        rate,
        distortion,
        aux_channel,
        decoder,
    })
}

/// `H(X|Y) + H(Y|X)` minus the oracle rate: a lower bound on the one-message
/// rate reduction.
pub fn rho1_oracle(p_xy: &JointPmf, d: &DistortionMatrix, target: f64, grid: GridSpec) -> Result<Bits> {
    let solution = wz_rate_oracle(p_xy, d, target, grid)?;
    Ok(lossless_sum_rate(p_xy) - solution.rate)
}

/// `H(X|Y) + H(Y|X)` of a joint with `X` on rows.
pub fn lossless_sum_rate(p_xy: &JointPmf) -> Bits {
    conditional_entropy(p_xy) + conditional_entropy(&p_xy.transpose())
}
