//! Witness functions `{0,1}^n -> [0,1]` and their concrete forms.
//!
//! A witness carries no orientation. The game asks for
//! `E_alice(f) - E_bob(f) >= eps`, while the uniform-distinguishing results
//! ask for `E_nu(f) - E_uniform(f) >= eps`; the consumer states which side
//! must exceed and wraps with [`Witness::complement`] when needed.

use serde::{Deserialize, Serialize};

use crate::distcore::{check_width, same_width, BitString, DensePmf, MAX_DENSE_WIDTH};
use crate::error::{Error, Result};
use crate::rng;

/// How expensive one evaluation is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostClass {
    /// Closed form, polynomial in `n`.
    Polytime,
    /// Backed by an exponentially large table.
    TableBacked,
}

/// Undirected graph for the MAXCUT witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct MaxCutGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
}

#[derive(Deserialize)]
struct RawGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
}

impl TryFrom<RawGraph> for MaxCutGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        MaxCutGraph::with_max_degree(raw.vertices, raw.edges, raw.max_degree)
    }
}

impl MaxCutGraph {
    /// Graph whose degree bound is its actual maximum degree.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let degree = Self::degrees(vertices, &edges)?.into_iter().max().unwrap_or(0);
        Self::with_max_degree(vertices, edges, degree.max(1))
    }

    pub fn with_max_degree(
        vertices: usize,
        edges: Vec<(usize, usize)>,
        max_degree: usize,
    ) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::param("degree bound must be at least 1"));
        }
        let mut normalized: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("duplicate edge"));
        }
        let degrees = Self::degrees(vertices, &edges)?;
        if let Some(v) = degrees.iter().position(|d| *d > max_degree) {
            return Err(Error::param(format!(
                "vertex {v} has degree {} above the bound {max_degree}",
                degrees[v]
            )));
        }
        Ok(MaxCutGraph {
            vertices,
            edges,
            max_degree,
        })
    }

    fn degrees(vertices: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>> {
        let mut degrees = vec![0usize; vertices];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::param(format!("self-loop at vertex {a}")));
            }
            if a >= vertices || b >= vertices {
                return Err(Error::param(format!("edge ({a},{b}) out of range")));
            }
            degrees[a] += 1;
            degrees[b] += 1;
        }
        Ok(degrees)
    }

    /// Random `degree`-regular simple graph by the pairing model with restarts.
    pub fn random_regular(vertices: usize, degree: usize, seed: u64) -> Result<Self> {
        use rand::seq::SliceRandom;
        if degree == 0 || degree >= vertices || (vertices * degree) % 2 == 1 {
            return Err(Error::param(format!(
                "no {degree}-regular simple graph on {vertices} vertices"
            )));
        }
        for attempt in 0..10_000u64 {
            let mut rng = rng::stream(seed, rng::domain::EXPERIMENT, attempt, 0);
            let mut stubs: Vec<usize> = (0..vertices)
                .flat_map(|v| std::iter::repeat_n(v, degree))
                .collect();
            stubs.shuffle(&mut rng);
            let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
            if let Ok(g) = MaxCutGraph::with_max_degree(vertices, edges, degree) {
                return Ok(g);
            }
        }
        Err(Error::Infeasible("pairing model kept producing multigraphs".into()))
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of edges cut by `x`.
    pub fn cut_size(&self, x: BitString) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| x.bit(a) != x.bit(b))
            .count()
    }

    /// Uniform distribution over the maximum cuts, by enumeration.
    pub fn max_cut_target(&self) -> Result<DensePmf> {
        check_width(self.vertices, MAX_DENSE_WIDTH, "max-cut enumeration")?;
        let cuts: Vec<usize> = (0..1usize << self.vertices)
            .map(|i| self.cut_size(BitString::from_index_unchecked(i, self.vertices)))
            .collect();
        let best = cuts.iter().copied().max().unwrap_or(0);
        DensePmf::from_weights(
            self.vertices,
            cuts.iter().map(|c| if *c == best { 1.0 } else { 0.0 }).collect(),
        )
    }
}

/// Membership table for indicator witnesses; serialized as the sorted member
/// list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    mask: Vec<bool>,
}

impl Membership {
    pub fn contains(&self, x: BitString) -> bool {
        self.mask[x.index()]
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|m| *m)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, m)| **m)
            .map(|(i, _)| i)
    }
}

/// The concrete form of a witness.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessBody {
    Constant(f64),
    Table(Vec<f64>),
    Indicator(Membership),
    /// `(1/(n Delta)) * #cut edges`.
    MaxCut(MaxCutGraph),
    /// `(1 + sign * (-1)^<z_mask, x>) / 2`, mask in bit-string convention.
    Parity { z_mask: u32, sign: i8 },
    /// Indicator of `{x : reference(x) >= theta}`.
    HeavySet { reference: DensePmf, theta: f64 },
    /// Indicator of `ceil(levels * f(x)) >= level`.
    Threshold {
        base: Box<Witness>,
        levels: u32,
        level: u32,
    },
    /// `1 - f`.
    Complement(Box<Witness>),
}

/// A function `{0,1}^n -> [0,1]` with a declared evaluation cost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WitnessRepr", into = "WitnessRepr")]
pub struct Witness {
    width: usize,
    body: WitnessBody,
}

impl Witness {
    fn build(width: usize, body: WitnessBody) -> Result<Self> {
        check_width(width, MAX_DENSE_WIDTH, "witness")?;
        let len = 1usize << width;
        match &body {
            WitnessBody::Constant(c) => {
                if !(0.0..=1.0).contains(c) {
                    return Err(Error::param(format!("constant {c} outside [0,1]")));
                }
            }
            WitnessBody::Table(values) => {
                if values.len() != len {
                    return Err(Error::param(format!(
                        "table has {} entries, expected {len}",
                        values.len()
                    )));
                }
                if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                    return Err(Error::param(format!("table value {v} outside [0,1]")));
                }
            }
            WitnessBody::Indicator(m) => {
                if m.mask.len() != len {
                    return Err(Error::param("indicator table has the wrong length"));
                }
            }
            WitnessBody::MaxCut(g) => same_width(width, g.vertices)?,
            WitnessBody::Parity { z_mask, sign } => {
                if (*z_mask as u64) >> width != 0 {
                    return Err(Error::param("parity mask wider than the witness"));
                }
                if *sign != 1 && *sign != -1 {
                    return Err(Error::param("parity sign must be +1 or -1"));
                }
            }
            WitnessBody::HeavySet { reference, theta } => {
                same_width(width, reference.width())?;
                if !(*theta >= 0.0) {
                    return Err(Error::param(format!("threshold {theta} is negative")));
                }
            }
            WitnessBody::Threshold {
                base,
                levels,
                level,
            } => {
                same_width(width, base.width)?;
                if *levels == 0 || *level > *levels {
                    return Err(Error::param("threshold level outside 0..=levels"));
                }
            }
            WitnessBody::Complement(base) => same_width(width, base.width)?,
        }
        Ok(Witness { width, body })
    }

    pub fn constant(width: usize, value: f64) -> Result<Self> {
        Self::build(width, WitnessBody::Constant(value))
    }

    pub fn table(width: usize, values: Vec<f64>) -> Result<Self> {
        Self::build(width, WitnessBody::Table(values))
    }

    /// Indicator from a full membership table indexed by bit-string index.
    pub fn indicator(width: usize, mask: Vec<bool>) -> Result<Self> {
        Self::build(width, WitnessBody::Indicator(Membership { mask }))
    }

    pub fn indicator_of<I: IntoIterator<Item = BitString>>(width: usize, set: I) -> Result<Self> {
        let mut mask = vec![false; 1 << width];
        for x in set {
            same_width(width, x.width())?;
            mask[x.index()] = true;
        }
        Self::indicator(width, mask)
    }

    pub fn parity(width: usize, z_mask: u32, sign: i8) -> Result<Self> {
        Self::build(width, WitnessBody::Parity { z_mask, sign })
    }

    pub fn complement(self) -> Witness {
        let width = self.width;
        Witness {
            width,
            body: WitnessBody::Complement(Box::new(self)),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn body(&self) -> &WitnessBody {
        &self.body
    }

    pub fn cost_class(&self) -> CostClass {
        match &self.body {
            WitnessBody::Constant(_) | WitnessBody::MaxCut(_) | WitnessBody::Parity { .. } => {
                CostClass::Polytime
            }
            WitnessBody::Table(_) | WitnessBody::Indicator(_) | WitnessBody::HeavySet { .. } => {
                CostClass::TableBacked
            }
            WitnessBody::Threshold { base, .. } | WitnessBody::Complement(base) => base.cost_class(),
        }
    }

    /// Whether every value lies in `{0, 1}` by construction.
    pub fn is_binary(&self) -> bool {
        match &self.body {
            WitnessBody::Constant(c) => *c == 0.0 || *c == 1.0,
            WitnessBody::Table(v) => v.iter().all(|x| *x == 0.0 || *x == 1.0),
            WitnessBody::Indicator(_)
            | WitnessBody::Parity { .. }
            | WitnessBody::HeavySet { .. }
            | WitnessBody::Threshold { .. } => true,
            WitnessBody::MaxCut(g) => g.edges.is_empty(),
            WitnessBody::Complement(base) => base.is_binary(),
        }
    }

    pub fn eval(&self, x: BitString) -> Result<f64> {
        same_width(self.width, x.width())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: BitString) -> f64 {
        match &self.body {
            WitnessBody::Constant(c) => *c,
            WitnessBody::Table(v) => v[x.index()],
            WitnessBody::Indicator(m) => m.contains(x) as u8 as f64,
            WitnessBody::MaxCut(g) => {
                g.cut_size(x) as f64 / (g.vertices * g.max_degree) as f64
            }
            WitnessBody::Parity { z_mask, sign } => {
                let odd = (x.index() as u32 & z_mask).count_ones() & 1 == 1;
                let chi = if odd { -1 } else { 1 };
                if chi * (*sign as i32) == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            WitnessBody::HeavySet { reference, theta } => (reference.prob(x) >= *theta) as u8 as f64,
            WitnessBody::Threshold {
                base,
                levels,
                level,
            } => (discretize(base.eval_unchecked(x), *levels) >= *level) as u8 as f64,
            WitnessBody::Complement(base) => 1.0 - base.eval_unchecked(x),
        }
    }

    /// Values at every bit string, in index order.
    pub fn values(&self) -> Vec<f64> {
        (0..1usize << self.width)
            .map(|i| self.eval_unchecked(BitString::from_index_unchecked(i, self.width)))
            .collect()
    }
}

/// `ceil(levels * v)` clamped to `0..=levels`.
fn discretize(v: f64, levels: u32) -> u32 {
    ((levels as f64 * v).ceil().max(0.0) as u32).min(levels)
}

/// `f_G(x) = (1/(n Delta)) sum_{(i,j) in E} [x_i != x_j]`.
pub fn maxcut_witness(graph: &MaxCutGraph) -> Witness {
    Witness {
        width: graph.vertices,
        body: WitnessBody::MaxCut(graph.clone()),
    }
}

/// Indicator of `{x : reference(x) >= theta}`.
pub fn heavy_set_witness(reference: &DensePmf, theta: f64) -> Result<Witness> {
    Witness::build(
        reference.width(),
        WitnessBody::HeavySet {
            reference: reference.clone(),
            theta,
        },
    )
}

/// Outcome of [`binarize`].
#[derive(Clone, Debug, PartialEq)]
pub struct Binarized {
    pub witness: Witness,
    /// `eps^2 / 8`, the rate the reduction guarantees.
    pub guaranteed_gap: f64,
    /// Exact gap `E_nu(f') - E_uniform(f')` of the returned indicator.
    pub achieved_gap: f64,
    pub levels: u32,
    pub level: u32,
    /// Whether the stronger `eps^2 / 4` rate also held on this instance.
    pub quarter_rate_met: bool,
}

/// Turns a `[0,1]`-valued witness with gap `eps` between `nu` and uniform into
/// a binary level-set indicator with gap at least `eps^2 / 8`.
///
/// `f` is rounded up to multiples of `1/(2m)`, `m = ceil(1/eps)`, and every
/// level set `{ceil(2m f) >= k}`, `k = 1..=2m`, is scored exactly against
/// `nu`; the best one is returned.
pub fn binarize(f: &Witness, eps: f64, nu: &DensePmf) -> Result<Binarized> {
    same_width(f.width, nu.width())?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(format!("eps = {eps} outside (0,1]")));
    }
    let m = (1.0 / eps).ceil() as u32;
    let levels = 2 * m;
    let uniform_weight = 1.0 / nu.len() as f64;
    // Per level: nu-mass and uniform mass of the points whose discretized
    // value is exactly that level; suffix sums give the level sets.
    let mut nu_at = vec![0.0; levels as usize + 1];
    let mut u_at = vec![0.0; levels as usize + 1];
    for (x, p) in nu.outcomes().zip(nu.probs()) {
        let l = discretize(f.eval_unchecked(x), levels) as usize;
        nu_at[l] += p;
        u_at[l] += uniform_weight;
    }
    let (mut best_level, mut best_gap) = (0u32, f64::NEG_INFINITY);
    let (mut nu_tail, mut u_tail) = (0.0, 0.0);
    for k in (1..=levels).rev() {
        nu_tail += nu_at[k as usize];
        u_tail += u_at[k as usize];
        let gap = nu_tail - u_tail;
        // `>=` while walking downwards keeps the lowest level among ties.
        if gap >= best_gap {
            best_gap = gap;
            best_level = k;
        }
    }
    let guaranteed_gap = eps * eps / 8.0;
    if best_gap < guaranteed_gap {
        return Err(Error::ReductionFailure {
            best: best_gap,
            required: guaranteed_gap,
        });
    }
    let witness = Witness::build(
        f.width,
        WitnessBody::Threshold {
            base: Box::new(f.clone()),
            levels,
            level: best_level,
        },
    )?;
    Ok(Binarized {
        witness,
        guaranteed_gap,
        achieved_gap: best_gap,
        levels,
        level: best_level,
        quarter_rate_met: best_gap >= eps * eps / 4.0,
    })
}

// ---------------------------------------------------------------------------
// JSON form: a tagged union mirroring `WitnessBody`.

#[derive(Clone, Serialize, Deserialize)]
struct WitnessRepr {
    width: usize,
    #[serde(flatten)]
    body: BodyRepr,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum BodyRepr {
    Constant { value: f64 },
    Table { values: Vec<f64> },
    Indicator { members: Vec<u32> },
    MaxCut { graph: MaxCutGraph },
    Parity { z_mask: u32, sign: i8 },
    HeavySet { reference: DensePmf, theta: f64 },
    Threshold { base: Box<Witness>, levels: u32, level: u32 },
    Complement { base: Box<Witness> },
}

impl From<Witness> for WitnessRepr {
    fn from(w: Witness) -> Self {
        let body = match w.body {
            WitnessBody::Constant(value) => BodyRepr::Constant { value },
            WitnessBody::Table(values) => BodyRepr::Table { values },
            WitnessBody::Indicator(m) => BodyRepr::Indicator {
                members: m.members().map(|i| i as u32).collect(),
            },
            WitnessBody::MaxCut(graph) => BodyRepr::MaxCut { graph },
            WitnessBody::Parity { z_mask, sign } => BodyRepr::Parity { z_mask, sign },
            WitnessBody::HeavySet { reference, theta } => BodyRepr::HeavySet { reference, theta },
            WitnessBody::Threshold {
                base,
                levels,
                level,
            } => BodyRepr::Threshold {
                base,
                levels,
                level,
            },
            WitnessBody::Complement(base) => BodyRepr::Complement { base },
        };
        WitnessRepr {
            width: w.width,
            body,
        }
    }
}

impl TryFrom<WitnessRepr> for Witness {
    type Error = Error;

    fn try_from(r: WitnessRepr) -> Result<Self> {
        check_width(r.width, MAX_DENSE_WIDTH, "witness")?;
        let body = match r.body {
            BodyRepr::Constant { value } => WitnessBody::Constant(value),
            BodyRepr::Table { values } => WitnessBody::Table(values),
            BodyRepr::Indicator { members } => {
                let mut mask = vec![false; 1 << r.width];
                for i in members {
                    *mask
                        .get_mut(i as usize)
                        .ok_or_else(|| Error::param(format!("member {i} out of range")))? = true;
                }
                WitnessBody::Indicator(Membership { mask })
            }
            BodyRepr::MaxCut { graph } => WitnessBody::MaxCut(graph),
            BodyRepr::Parity { z_mask, sign } => WitnessBody::Parity { z_mask, sign },
            BodyRepr::HeavySet { reference, theta } => WitnessBody::HeavySet { reference, theta },
            BodyRepr::Threshold {
                base,
                levels,
                level,
            } => WitnessBody::Threshold {
                base,
                levels,
                level,
            },
            BodyRepr::Complement { base } => WitnessBody::Complement(base),
        };
        Witness::build(r.width, body)
    }
}
