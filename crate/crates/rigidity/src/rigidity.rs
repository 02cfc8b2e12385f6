//! Rigidity matrices, generic and normalized realization sampling, and the
//! rigidity tests. "Rigid" verdicts are exact certificates: a single
//! full-rank exact rank computation at a sampled point lower-bounds the
//! generic rank. Only "flexible" verdicts are probabilistic, with a
//! Schwartz-Zippel failure bound reported.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, VertexId};
use crate::linalg::{rank_exact, rat_int, ExactMatrix, Rational};

pub const DEFAULT_COORD_BOUND: i64 = 1 << 20;
pub const DEFAULT_TRIALS: u32 = 3;
pub const MAX_SAMPLE_ATTEMPTS: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RigidityError {
    #[error("realization does not cover all vertices")]
    MissingCoordinates,
    #[error("no suitable realization after {MAX_SAMPLE_ATTEMPTS} attempts; the graph may not be minimally 3-rigid")]
    DegenerateSample,
}

/// Exact-rational coordinate assignment for every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    d: usize,
    coords: Vec<Vec<Rational>>,
}

impl Realization {
    pub fn new(d: usize, coords: Vec<Vec<Rational>>) -> Self {
        assert!(coords.iter().all(|c| c.len() == d));
        Realization { d, coords }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate i (1-based, matching the column labels) of vertex v.
    pub fn coord(&self, v: VertexId, i: usize) -> &Rational {
        &self.coords[v.0][i - 1]
    }

    pub fn point(&self, v: VertexId) -> &[Rational] {
        &self.coords[v.0]
    }

    /// Adds a constant vector to every point.
    pub fn translate(&self, shift: &[Rational]) -> Realization {
        assert_eq!(shift.len(), self.d);
        Realization {
            d: self.d,
            coords: self
                .coords
                .iter()
                .map(|p| p.iter().zip(shift).map(|(a, b)| a + b).collect())
                .collect(),
        }
    }
}

/// A 3-dimensional realization with p(z) at the origin and p(x) - p(y)
/// along the first axis.
#[derive(Clone, Debug)]
pub struct NormalizedRealization {
    pub base: Realization,
    pub x: VertexId,
    pub y: VertexId,
    pub z: VertexId,
    pub lambda: Rational,
}

/// The rigidity matrix together with its row and column labels. Columns are
/// ordered coordinate-major: (v,i) < (w,j) iff i < j, or i = j and v < w.
#[derive(Clone, Debug)]
pub struct RigidityMatrix {
    pub matrix: ExactMatrix,
    pub row_edges: Vec<Edge>,
    pub col_labels: Vec<(VertexId, usize)>,
}

impl RigidityMatrix {
    /// Column index of the label (v, i) with i 1-based.
    pub fn col_index(&self, n: usize, v: VertexId, i: usize) -> usize {
        (i - 1) * n + v.0
    }
}

/// Builds R(G,p) with an explicit row order.
pub fn rigidity_matrix_with_rows(
    g: &Graph,
    p: &Realization,
    rows: &[Edge],
) -> Result<RigidityMatrix, RigidityError> {
    if p.len() != g.num_vertices() {
        return Err(RigidityError::MissingCoordinates);
    }
    assert!(g.is_simple(), "rigidity matrix requires a simple graph");
    let n = g.num_vertices();
    let d = p.dim();
    let mut matrix = ExactMatrix::zero(rows.len(), d * n);
    for (r, e) in rows.iter().enumerate() {
        for i in 1..=d {
            let diff = p.coord(e.u, i) - p.coord(e.v, i);
            matrix.set(r, (i - 1) * n + e.u.0, diff.clone());
            matrix.set(r, (i - 1) * n + e.v.0, -diff);
        }
    }
    let col_labels = (1..=d)
        .flat_map(|i| (0..n).map(move |v| (VertexId(v), i)))
        .collect();
    Ok(RigidityMatrix {
        matrix,
        row_edges: rows.to_vec(),
        col_labels,
    })
}

/// Builds R(G,p) with rows in sorted edge order.
pub fn rigidity_matrix(g: &Graph, p: &Realization) -> Result<RigidityMatrix, RigidityError> {
    rigidity_matrix_with_rows(g, p, g.edges())
}

/// Uniform integer coordinates in [-bound, bound], deterministic per seed.
pub fn sample_generic(g: &Graph, d: usize, seed: u64, bound: i64) -> Realization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..g.num_vertices())
        .map(|_| (0..d).map(|_| rat_int(rng.gen_range(-bound..=bound))).collect())
        .collect();
    Realization::new(d, coords)
}

/// The default choice of pinned vertex: the smallest id outside {x, y}.
pub fn default_z(e: Edge) -> VertexId {
    VertexId((0..).find(|&w| w != e.u.0 && w != e.v.0).unwrap())
}

/// Directly samples a realization in the normalized frame: p(z) = origin,
/// p(x) = p(y) + (lambda, 0, 0) with lambda nonzero, everything else
/// uniform integer. Rigid motions preserve rigidity-matrix rank, so this
/// stands in for rotating and translating a generic sample; rank
/// degeneracies are caught by the caller's acceptance predicate.
pub fn sample_normalized_attempt(
    g: &Graph,
    e: Edge,
    z: VertexId,
    seed: u64,
    bound: i64,
    attempt: u32,
) -> NormalizedRealization {
    assert!(z != e.u && z != e.v, "z must differ from the edge endpoints");
    let (x, y) = (e.u, e.v);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 + attempt as u64);
    let n = g.num_vertices();
    let mut coords = vec![Vec::new(); n];
    let draw = |rng: &mut ChaCha8Rng| rat_int(rng.gen_range(-bound..=bound));
    let lambda = loop {
        let l = rng.gen_range(-bound..=bound);
        if l != 0 {
            break rat_int(l);
        }
    };
    let y_point: Vec<Rational> = (0..3).map(|_| draw(&mut rng)).collect();
    for v in 0..n {
        let w = VertexId(v);
        coords[v] = if w == z {
            vec![rat_int(0), rat_int(0), rat_int(0)]
        } else if w == y {
            y_point.clone()
        } else if w == x {
            vec![
                &y_point[0] + &lambda,
                y_point[1].clone(),
                y_point[2].clone(),
            ]
        } else {
            (0..3).map(|_| draw(&mut rng)).collect()
        };
    }
    NormalizedRealization {
        base: Realization::new(3, coords),
        x,
        y,
        z,
        lambda,
    }
}

pub fn sample_normalized(
    g: &Graph,
    e: Edge,
    z: VertexId,
    seed: u64,
    bound: i64,
) -> NormalizedRealization {
    sample_normalized_attempt(g, e, z, seed, bound, 0)
}

/// Resamples until `accept` holds, up to [`MAX_SAMPLE_ATTEMPTS`] tries.
pub fn sample_normalized_where(
    g: &Graph,
    e: Edge,
    z: VertexId,
    seed: u64,
    bound: i64,
    mut accept: impl FnMut(&NormalizedRealization) -> bool,
) -> Result<NormalizedRealization, RigidityError> {
    for attempt in 0..MAX_SAMPLE_ATTEMPTS {
        let p = sample_normalized_attempt(g, e, z, seed, bound, attempt);
        if accept(&p) {
            return Ok(p);
        }
    }
    Err(RigidityError::DegenerateSample)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidCertificate {
    pub trial: u32,
    pub rank: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlexibleReport {
    pub best_rank: usize,
    pub target: usize,
    pub trials: u32,
    /// Upper bound on the probability that a d-rigid graph evades every
    /// trial (Schwartz-Zippel per trial, multiplied across trials).
    pub failure_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RigidityVerdict {
    Rigid(RigidCertificate),
    ProbablyFlexible(FlexibleReport),
}

impl RigidityVerdict {
    pub fn is_rigid(&self) -> bool {
        matches!(self, RigidityVerdict::Rigid(_))
    }
}

fn full_rank_target(n: usize, d: usize) -> usize {
    d * n - d * (d + 1) / 2
}

/// Probabilistic d-rigidity test with an exact Rigid certificate. For
/// |V| <= d the complete-graph convention applies and no sampling is done.
pub fn is_rigid(g: &Graph, d: usize, seed: u64, trials: u32, bound: i64) -> RigidityVerdict {
    let n = g.num_vertices();
    if n <= d {
        return if g.is_simple() && g.num_edges() == n * (n - 1) / 2 {
            RigidityVerdict::Rigid(RigidCertificate {
                trial: 0,
                rank: g.num_edges(),
                target: g.num_edges(),
            })
        } else {
            RigidityVerdict::ProbablyFlexible(FlexibleReport {
                best_rank: 0,
                target: n * (n.saturating_sub(1)) / 2,
                trials: 0,
                failure_bound: 0.0,
            })
        };
    }
    let target = full_rank_target(n, d);
    let mut best = 0usize;
    for trial in 0..trials {
        let p = sample_generic(g, d, seed.wrapping_add(trial as u64), bound);
        let rm = rigidity_matrix(g, &p).expect("sampled realization covers all vertices");
        let rank = rank_exact(&rm.matrix);
        if rank == target {
            return RigidityVerdict::Rigid(RigidCertificate {
                trial,
                rank,
                target,
            });
        }
        best = best.max(rank);
    }
    // Any maximal minor is a polynomial of degree at most its size in the
    // coordinates; one trial misses a rigid graph with probability at most
    // deg / (2*bound + 1).
    let degree = target.min(g.num_edges()) as f64;
    let per_trial = degree / (2.0 * bound as f64 + 1.0);
    RigidityVerdict::ProbablyFlexible(FlexibleReport {
        best_rank: best,
        target,
        trials,
        failure_bound: per_trial.powi(trials as i32),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum MinimalityVerdict {
    MinimallyRigid(RigidCertificate),
    /// Rigid, but with more edges than d|V| - (d+1 choose 2).
    RigidNotMinimal { edges: usize, required: usize },
    NotRigid(FlexibleReport),
}

impl MinimalityVerdict {
    pub fn is_minimally_rigid(&self) -> bool {
        matches!(self, MinimalityVerdict::MinimallyRigid(_))
    }
}

/// Minimal d-rigidity: a Rigid verdict plus the exact edge count. Full row
/// rank makes every edge necessary, so no per-edge deletion loop is needed.
pub fn is_minimally_rigid(
    g: &Graph,
    d: usize,
    seed: u64,
    trials: u32,
    bound: i64,
) -> MinimalityVerdict {
    let n = g.num_vertices();
    let required = if n <= d {
        n * (n.saturating_sub(1)) / 2
    } else {
        full_rank_target(n, d)
    };
    match is_rigid(g, d, seed, trials, bound) {
        RigidityVerdict::Rigid(cert) => {
            if g.num_edges() == required {
                MinimalityVerdict::MinimallyRigid(cert)
            } else {
                MinimalityVerdict::RigidNotMinimal {
                    edges: g.num_edges(),
                    required,
                }
            }
        }
        RigidityVerdict::ProbablyFlexible(report) => MinimalityVerdict::NotRigid(report),
    }
}
