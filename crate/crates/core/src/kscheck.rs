//! Kochen–Specker machinery for finite ray sets: exact orthogonality
//! graphs, a 0/1 coloring solver, and the per-context perturbation that
//! dissolves the contradiction at finite precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::{classify_in_frame, verify_eq1, TruthValue};
use crate::density::{suitable_frame_near_exact, vector_from_f64};
use crate::error::{Error, Result};
use crate::fields::{QuadComplex, QuadRational, Rational};
use crate::io::FORMAT_VERSION;
use crate::linalg::{Frame, GVector};

const PERES33: &str = include_str!("../data/peres33.rays");
const CABELLO18: &str = include_str!("../data/cabello18.rays");

/// The coordinate field of a ray set file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    /// Gaussian rationals.
    Rational,
    /// Q(√2) + iQ(√2).
    Quad2,
}

/// A nonzero vector over Q(√2) + iQ(√2), standing for the ray it spans.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuadRay(Vec<QuadComplex>);

impl QuadRay {
    pub fn new(entries: Vec<QuadComplex>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::invalid("a ray needs at least two coordinates"));
        }
        if entries.iter().all(QuadComplex::is_zero) {
            return Err(Error::invalid("the zero vector spans no ray"));
        }
        Ok(QuadRay(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[QuadComplex] {
        &self.0
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &QuadRay) -> QuadComplex {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| &a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> QuadRational {
        self.0.iter().map(QuadComplex::norm_sqr).sum()
    }

    fn is_rational(&self) -> bool {
        self.0
            .iter()
            .all(|z| z.re.sqrt2.is_zero() && z.im.sqrt2.is_zero())
    }

    /// Unit-normalized interleaved `(re, im)` machine coordinates.
    pub fn unit_f64(&self) -> Vec<f64> {
        let flat: Vec<f64> = self
            .0
            .iter()
            .flat_map(|z| {
                let (a, b) = z.to_f64();
                [a, b]
            })
            .collect();
        let norm = flat.iter().map(|x| x * x).sum::<f64>().sqrt();
        flat.into_iter().map(|x| x / norm).collect()
    }

    /// Squared Frobenius distance between the projectors onto this ray and
    /// `v`, computed exactly in Q(√2).
    pub fn dist2_to(&self, v: &GVector) -> QuadRational {
        let w = QuadRay(v.entries().iter().cloned().map(QuadComplex::from).collect());
        let overlap = self.inner(&w).norm_sqr();
        let ratio = &overlap / &(&self.norm_sqr() * &w.norm_sqr());
        (QuadRational::one() - ratio).scale(&Rational::from(2))
    }
}

impl fmt::Debug for QuadRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format_version: u32,
    dimension: usize,
    field: Field,
}

/// A finite labelled set of rays of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySet {
    dimension: usize,
    field: Field,
    rays: Vec<QuadRay>,
    labels: Vec<String>,
}

impl RaySet {
    pub fn new(
        dimension: usize,
        field: Field,
        rays: Vec<QuadRay>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::invalid("ray set dimension must be at least 2"));
        }
        if rays.len() != labels.len() {
            return Err(Error::invalid("one label per ray is required"));
        }
        for (r, l) in rays.iter().zip(&labels) {
            if r.dim() != dimension {
                return Err(Error::invalid(format!(
                    "ray {l} has {} coordinates, expected {dimension}",
                    r.dim()
                )));
            }
            if field == Field::Rational && !r.is_rational() {
                return Err(Error::invalid(format!(
                    "ray {l} has a √2 component in a rational set"
                )));
            }
        }
        Ok(RaySet {
            dimension,
            field,
            rays,
            labels,
        })
    }

    /// Parses the line format: `#` comments and blank lines are skipped, the
    /// first remaining line is a JSON header, and every later line is a
    /// label followed by a JSON list of coordinates.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, head) = lines
            .next()
            .ok_or_else(|| Error::invalid("empty ray set file"))?;
        let header: Header = serde_json::from_str(head)
            .map_err(|e| Error::invalid(format!("bad ray set header: {e}")))?;
        if header.format_version != FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "unsupported format version {}",
                header.format_version
            )));
        }
        let mut rays = Vec::new();
        let mut labels = Vec::new();
        for (no, line) in lines {
            let (label, coords) = line.split_once(char::is_whitespace).ok_or_else(|| {
                Error::invalid(format!("line {no}: expected a label and coordinates"))
            })?;
            let entries: Vec<QuadComplex> = serde_json::from_str(coords.trim())
                .map_err(|e| Error::invalid(format!("line {no}: {e}")))?;
            rays.push(
                QuadRay::new(entries).map_err(|e| Error::invalid(format!("line {no}: {e}")))?,
            );
            labels.push(label.to_string());
        }
        RaySet::new(header.dimension, header.field, rays, labels)
    }

    pub fn to_text(&self) -> String {
        let header = Header {
            format_version: FORMAT_VERSION,
            dimension: self.dimension,
            field: self.field,
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for (r, l) in self.rays.iter().zip(&self.labels) {
            out.push_str(l);
            out.push(' ');
            out.push_str(&serde_json::to_string(r).expect("ray serializes"));
            out.push('\n');
        }
        out
    }

    /// The 33-ray set in R^3 built from permutations of `(0,0,1)`,
    /// `(0,±1,1)`, `(0,±1,√2)` and `(±1,±1,√2)`.
    pub fn peres33() -> Self {
        RaySet::parse(PERES33).expect("bundled ray set parses")
    }

    /// An 18-ray set in C^4 covered by nine bases, each ray in two.
    pub fn cabello18() -> Self {
        RaySet::parse(CABELLO18).expect("bundled ray set parses")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rays(&self) -> &[QuadRay] {
        &self.rays
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// The rays at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let pick = |i: &usize| {
            self.rays
                .get(*i)
                .ok_or_else(|| Error::invalid(format!("no ray {i}")))
        };
        let rays = indices
            .iter()
            .map(|i| pick(i).cloned())
            .collect::<Result<_>>()?;
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        RaySet::new(self.dimension, self.field, rays, labels)
    }
}

/// Exact orthogonality relation of a ray set and its full contexts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthGraph {
    dimension: usize,
    adjacency: Vec<Vec<usize>>,
    contexts: Vec<Vec<usize>>,
}

impl OrthGraph {
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Rays orthogonal to ray `i`, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Sets of `dimension` mutually orthogonal rays, ascending within and
    /// lexicographic across.
    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

pub fn build_graph(rs: &RaySet) -> OrthGraph {
    let k = rs.len();
    let mut adjacency = vec![Vec::new(); k];
    for i in 0..k {
        for j in i + 1..k {
            if rs.rays[i].inner(&rs.rays[j]).is_zero() {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let mut contexts = Vec::new();
    let mut clique = Vec::new();
    extend_cliques(
        &adjacency,
        rs.dimension,
        &mut clique,
        &(0..k).collect::<Vec<_>>(),
        &mut contexts,
    );
    OrthGraph {
        dimension: rs.dimension,
        adjacency,
        contexts,
    }
}

fn extend_cliques(
    adj: &[Vec<usize>],
    size: usize,
    clique: &mut Vec<usize>,
    candidates: &[usize],
    out: &mut Vec<Vec<usize>>,
) {
    if clique.len() == size {
        out.push(clique.clone());
        return;
    }
    for (pos, &c) in candidates.iter().enumerate() {
        let rest: Vec<usize> = candidates[pos + 1..]
            .iter()
            .copied()
            .filter(|x| adj[c].binary_search(x).is_ok())
            .collect();
        if clique.len() + 1 + rest.len() < size {
            continue;
        }
        clique.push(c);
        extend_cliques(adj, size, clique, &rest, out);
        clique.pop();
    }
}

/// A 0/1 value per ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Coloring {
    assignment: Vec<u8>,
}

impl Coloring {
    pub fn new(assignment: Vec<u8>) -> Result<Self> {
        if assignment.iter().any(|&x| x > 1) {
            return Err(Error::invalid("colorings take values 0 and 1"));
        }
        Ok(Coloring { assignment })
    }

    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 1)
            .map(|(i, _)| i)
    }

    /// No two orthogonal rays are both 1 and every context has exactly one 1.
    pub fn is_valid(&self, g: &OrthGraph) -> bool {
        self.assignment.len() == g.len()
            && (0..g.len()).all(|i| {
                self.assignment[i] == 0 || g.neighbors(i).iter().all(|&j| self.assignment[j] == 0)
            })
            && g.contexts()
                .iter()
                .all(|c| c.iter().map(|&i| self.assignment[i] as u32).sum::<u32>() == 1)
    }
}

struct Solver<'a> {
    g: &'a OrthGraph,
    contexts_of: Vec<Vec<usize>>,
}

type State = Vec<Option<bool>>;

impl Solver<'_> {
    fn propagate(&self, st: &mut State, ray: usize, value: bool) -> bool {
        let mut stack = vec![(ray, value)];
        while let Some((i, v)) = stack.pop() {
            match st[i] {
                Some(cur) if cur == v => continue,
                Some(_) => return false,
                None => st[i] = Some(v),
            }
            if v {
                stack.extend(self.g.neighbors(i).iter().map(|&j| (j, false)));
                continue;
            }
            for &c in &self.contexts_of[i] {
                let ctx = &self.g.contexts[c];
                if ctx.iter().any(|&j| st[j] == Some(true)) {
                    continue;
                }
                let mut open = ctx.iter().filter(|&&j| st[j].is_none());
                match (open.next(), open.next()) {
                    (None, _) => return false,
                    (Some(&j), None) => stack.push((j, true)),
                    _ => {}
                }
            }
        }
        true
    }

    /// The open context with the fewest unassigned rays, if any is open.
    fn most_constrained(&self, st: &State) -> Option<&[usize]> {
        self.g
            .contexts
            .iter()
            .filter(|c| !c.iter().any(|&j| st[j] == Some(true)))
            .min_by_key(|c| c.iter().filter(|&&j| st[j].is_none()).count())
            .map(Vec::as_slice)
    }

    fn search(&self, st: State) -> Option<State> {
        let Some(ctx) = self.most_constrained(&st) else {
            return Some(st.into_iter().map(|v| Some(v.unwrap_or(false))).collect());
        };
        let ray = *ctx.iter().find(|&&j| st[j].is_none())?;
        for value in [true, false] {
            let mut next = st.clone();
            if self.propagate(&mut next, ray, value) {
                if let Some(done) = self.search(next) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// A coloring valid for every context and orthogonal pair, or `None` when
/// the graph is uncolorable.
///
/// Backtracking over the open context with the fewest unassigned rays,
/// with unit propagation: a 1 forces 0 on all orthogonal rays, a context
/// whose other rays are all 0 forces its last ray to 1, and a context of
/// all 0s is a conflict.
pub fn find_ks_coloring(g: &OrthGraph) -> Option<Coloring> {
    let mut contexts_of = vec![Vec::new(); g.len()];
    for (c, ctx) in g.contexts.iter().enumerate() {
        for &i in ctx {
            contexts_of[i].push(c);
        }
    }
    let solver = Solver { g, contexts_of };
    let st = solver.search(vec![None; g.len()])?;
    let coloring = Coloring {
        assignment: st.into_iter().map(|v| u8::from(v == Some(true))).collect(),
    };
    debug_assert!(coloring.is_valid(g));
    Some(coloring)
}

/// One context mapped to a nearby suitable frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextReport {
    pub rays: Vec<usize>,
    pub labels: Vec<String>,
    pub frame: Frame,
    pub values: Vec<TruthValue>,
    pub sum: u32,
    /// Worst squared projector distance from an original ray to its image.
    pub achieved_dist2: QuadRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub context: usize,
    pub leg: usize,
}

/// Where one originally shared ray went in each context containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub ray: usize,
    pub label: String,
    pub occurrences: Vec<Occurrence>,
    /// Every pair of images spans different rays.
    pub distinct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NullificationReport {
    pub epsilon: Rational,
    pub contexts: Vec<ContextReport>,
    pub divergences: Vec<Divergence>,
}

const MAX_RETRIES: u32 = 40;

/// Replaces every context of `rs`, independently, by an exact suitable
/// frame within `eps` of it, then tabulates how each ray shared between
/// contexts is split into different rays.
///
/// A context whose image would reproduce exactly the image of a shared ray
/// already placed by an earlier context is redone at a halved tolerance.
pub fn perturb_to_suitable(rs: &RaySet, eps: &Rational) -> Result<NullificationReport> {
    if !eps.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let g = build_graph(rs);
    if g.contexts.is_empty() {
        return Err(Error::invalid("the ray set has no complete context"));
    }
    let eps2 = QuadRational::rational(eps.square());
    let mut images: Vec<Vec<(usize, GVector)>> = vec![Vec::new(); rs.len()];
    let mut reports = Vec::with_capacity(g.contexts.len());
    for (c, ctx) in g.contexts.iter().enumerate() {
        let targets = ctx
            .iter()
            .map(|&i| vector_from_f64(&rs.rays[i].unit_f64()))
            .collect::<Result<Vec<_>>>()?;
        let mut tol = eps.clone();
        let mut accepted = None;
        for _ in 0..MAX_RETRIES {
            let approx = suitable_frame_near_exact(&targets, &tol)?;
            let legs = approx.object.legs();
            let worst = ctx
                .iter()
                .zip(legs)
                .map(|(&i, v)| rs.rays[i].dist2_to(v))
                .max()
                .expect("nonempty context");
            let clash = ctx
                .iter()
                .zip(legs)
                .any(|(&i, v)| images[i].iter().any(|(_, w)| w.same_ray(v)));
            if worst <= eps2 && !clash {
                accepted = Some((approx.object, worst));
                break;
            }
            tol = tol / Rational::from(2);
        }
        let (frame, worst) = accepted.ok_or_else(|| Error::ResourceLimit {
            message: format!(
                "context {c}: no coincidence-free suitable frame within {MAX_RETRIES} halvings"
            ),
            achieved: None,
        })?;
        for (&i, v) in ctx.iter().zip(frame.legs()) {
            images[i].push((c, v.clone()));
        }
        reports.push(ContextReport {
            rays: ctx.clone(),
            labels: ctx.iter().map(|&i| rs.labels[i].clone()).collect(),
            values: classify_in_frame(&frame),
            sum: verify_eq1(&frame)?,
            frame,
            achieved_dist2: worst,
        });
    }
    let divergences = images
        .iter()
        .enumerate()
        .filter(|(_, imgs)| imgs.len() > 1)
        .map(|(i, imgs)| Divergence {
            ray: i,
            label: rs.labels[i].clone(),
            occurrences: imgs
                .iter()
                .map(|(c, _)| Occurrence {
                    context: *c,
                    leg: g.contexts[*c].iter().position(|&j| j == i).expect("member"),
                })
                .collect(),
            distinct: imgs
                .iter()
                .enumerate()
                .all(|(a, (_, u))| imgs[a + 1..].iter().all(|(_, v)| !u.same_ray(v))),
        })
        .collect();
    Ok(NullificationReport {
        epsilon: eps.clone(),
        contexts: reports,
        divergences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_set(dim: usize, rays: &[&[i64]]) -> RaySet {
        let rays: Vec<QuadRay> = rays
            .iter()
            .map(|r| {
                QuadRay::new(
                    r.iter()
                        .map(|&x| QuadComplex::from(Rational::from(x)))
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let labels = (0..rays.len()).map(|i| format!("r{i}")).collect();
        RaySet::new(dim, Field::Rational, rays, labels).unwrap()
    }

    #[test]
    fn standard_basis_has_one_context() {
        let rs = rational_set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let g = build_graph(&rs);
        assert_eq!(g.contexts(), &[vec![0, 1, 2]]);
        let c = find_ks_coloring(&g).unwrap();
        assert!(c.is_valid(&g));
        assert_eq!(c.assignment(), &[1, 0, 0]);
        let rs = rational_set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(build_graph(&rs).contexts().len(), 1);
    }

    #[test]
    fn disjoint_contexts_colorable() {
        let rs = rational_set(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]);
        let g = build_graph(&rs);
        assert_eq!(g.contexts().len(), 2);
        assert!(find_ks_coloring(&g).unwrap().is_valid(&g));
    }

    #[test]
    fn bundled_sets_parse_and_count() {
        let p = RaySet::peres33();
        assert_eq!((p.len(), p.dimension(), p.field()), (33, 3, Field::Quad2));
        let g = build_graph(&p);
        assert_eq!(g.contexts().len(), 16);
        assert!(g.edge_count() > 16 * 3);
        assert!(find_ks_coloring(&g).is_none());
        let c = RaySet::cabello18();
        let g = build_graph(&c);
        assert_eq!((c.len(), g.contexts().len()), (18, 9));
        assert!(find_ks_coloring(&g).is_none());
    }

    #[test]
    fn text_round_trip() {
        let p = RaySet::peres33();
        assert_eq!(RaySet::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn parse_errors() {
        assert!(RaySet::parse("").is_err());
        assert!(RaySet::parse(
            r#"{"format_version":1,"dimension":3,"field":"rational"}
a [1,2]"#
        )
        .is_err());
        assert!(RaySet::parse(
            r#"{"format_version":1,"dimension":2,"field":"rational"}
a [{"sqrt2":"1"},"0"]"#
        )
        .is_err());
        assert!(RaySet::parse(
            r#"{"format_version":1,"dimension":2,"field":"rational"}
a ["0","0"]"#
        )
        .is_err());
    }

    #[test]
    fn invalid_colorings_rejected() {
        let rs = rational_set(2, &[&[1, 0], &[0, 1]]);
        let g = build_graph(&rs);
        assert!(!Coloring::new(vec![1, 1]).unwrap().is_valid(&g));
        assert!(!Coloring::new(vec![0, 0]).unwrap().is_valid(&g));
        assert!(Coloring::new(vec![0, 1]).unwrap().is_valid(&g));
        assert!(Coloring::new(vec![2, 0]).is_err());
    }

    #[test]
    fn perturb_single_context() {
        let rs = rational_set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let r = perturb_to_suitable(&rs, &Rational::frac(1, 100)).unwrap();
        assert_eq!(r.contexts.len(), 1);
        assert_eq!(r.contexts[0].sum, 1);
        assert!(r.divergences.is_empty());
    }

    #[test]
    fn perturb_peres() {
        let rs = RaySet::peres33();
        let eps = Rational::frac(1, 10_000);
        let r = perturb_to_suitable(&rs, &eps).unwrap();
        assert_eq!(r.contexts.len(), 16);
        assert!(r
            .contexts
            .iter()
            .all(|c| c.sum == 1 && c.achieved_dist2 <= QuadRational::rational(eps.square())));
        assert!(!r.divergences.is_empty());
        assert!(r.divergences.iter().all(|d| d.distinct));
    }
}
