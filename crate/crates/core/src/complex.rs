//! Pure weighted simplicial complexes: faces, level distributions, links,
//! and the weighted walk graph of a link.
//!
//! A complex is built from its maximal faces (all of one dimension `d`) and a
//! positive weight per facet. The weight vector, normalized, is the top-level
//! distribution; every lower level carries the marginal obtained by removing
//! a uniformly chosen element, one level at a time. All distributions are
//! materialized densely and checked against that recursion at build time.

use std::collections::{HashMap, HashSet};
use std::fmt;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::tol;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("no facets given")]
    EmptyInput,
    #[error("facets must share one dimension: expected {expected}, facet {facet} has dimension {found}")]
    NonPure {
        expected: i32,
        found: i32,
        facet: String,
    },
    #[error("duplicate facet {0}")]
    DuplicateFacet(String),
    #[error("facet weight must be positive and finite, got {0}")]
    NonPositiveWeight(f64),
    #[error("{0} facets but {1} weights")]
    WeightCountMismatch(usize, usize),
    #[error("vertex list {0:?} repeats a vertex")]
    RepeatedVertex(Vec<u32>),
    #[error("face {0} is not in the complex")]
    FaceNotPresent(String),
    #[error("face {face} has dimension {dim}; this operation needs dimension at most {max}")]
    DimensionTooHigh { face: String, dim: i32, max: i32 },
    #[error("level {0} out of range -1..={1}")]
    LevelOutOfRange(i32, i32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid complex: {0}")]
    Invalid(String),
}

/// A face: a strictly increasing list of vertex identifiers. The empty face
/// (dimension -1) is valid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    vertices: Vec<u32>,
}

impl Face {
    /// Builds a face from an arbitrary vertex list; sorts it and rejects
    /// repeats.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self, ComplexError> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedVertex(vertices));
        }
        Ok(Face { vertices })
    }

    pub fn empty() -> Self {
        Face { vertices: Vec::new() }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// `|face| - 1`; the empty face has dimension -1.
    pub fn dimension(&self) -> i32 {
        self.vertices.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Superset test: does `self` contain every vertex of `other`?
    pub fn contains(&self, other: &Face) -> bool {
        other.vertices.iter().all(|&v| self.contains_vertex(v))
    }

    /// The face with the vertex at position `i` removed.
    pub fn without_index(&self, i: usize) -> Face {
        let mut v = self.vertices.clone();
        v.remove(i);
        Face { vertices: v }
    }

    /// The face extended by a vertex not already present.
    pub fn extended(&self, v: u32) -> Face {
        let pos = self
            .vertices
            .binary_search(&v)
            .expect_err("vertex already in face");
        let mut vs = self.vertices.clone();
        vs.insert(pos, v);
        Face { vertices: vs }
    }

    /// Vertices of `self` that are not in `other`.
    pub fn difference(&self, other: &Face) -> Face {
        Face {
            vertices: self
                .vertices
                .iter()
                .copied()
                .filter(|&v| !other.contains_vertex(v))
                .collect(),
        }
    }

    /// Disjoint union with another face.
    pub fn union(&self, other: &Face) -> Result<Face, ComplexError> {
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices);
        Face::new(v)
    }

    /// All subsets with `size` vertices, in lexicographic order.
    pub fn subsets_of_size(&self, size: usize) -> Vec<Face> {
        use itertools::Itertools;
        self.vertices
            .iter()
            .copied()
            .combinations(size)
            .map(|vertices| Face { vertices })
            .collect()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u64 = 1;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// A pure `d`-dimensional weighted simplicial complex with one probability
/// distribution per level, satisfying the one-step marginal recursion
/// `pi_j(a) = (1/(j+2)) * sum over cofaces b of pi_{j+1}(b)`.
///
/// Levels are indexed by dimension `j` in `-1..=d`; each level stores its
/// faces in sorted order with a face-to-index map for matrix work.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    d: usize,
    /// `levels[l]` holds the faces of dimension `l - 1`.
    levels: Vec<Vec<Face>>,
    index: Vec<HashMap<Face, usize>>,
    pi: Vec<Vec<f64>>,
}

impl WeightedComplex {
    /// Builds the complex from its maximal faces and positive weights: the
    /// normalized weights become the top-level distribution and every lower
    /// level is generated by downward closure with the marginal recursion.
    pub fn build(facets: Vec<Face>, weights: Vec<f64>) -> Result<Self, ComplexError> {
        if facets.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        if facets.len() != weights.len() {
            return Err(ComplexError::WeightCountMismatch(facets.len(), weights.len()));
        }
        let dim = facets[0].dimension();
        if dim < 0 {
            return Err(ComplexError::Invalid("facets must be nonempty faces".into()));
        }
        for f in &facets {
            if f.dimension() != dim {
                return Err(ComplexError::NonPure {
                    expected: dim,
                    found: f.dimension(),
                    facet: f.to_string(),
                });
            }
        }
        let mut seen = HashSet::new();
        for f in &facets {
            if !seen.insert(f.clone()) {
                return Err(ComplexError::DuplicateFacet(f.to_string()));
            }
        }
        for &w in &weights {
            if !(w.is_finite() && w > 0.0) {
                return Err(ComplexError::NonPositiveWeight(w));
            }
        }
        let d = dim as usize;
        let total: f64 = weights.iter().sum();

        let mut top: Vec<(Face, f64)> = facets
            .into_iter()
            .zip(weights.iter().map(|w| w / total))
            .collect();
        top.sort_by(|a, b| a.0.cmp(&b.0));

        let mut levels: Vec<Vec<Face>> = vec![Vec::new(); d + 2];
        let mut pi: Vec<Vec<f64>> = vec![Vec::new(); d + 2];
        levels[d + 1] = top.iter().map(|(f, _)| f.clone()).collect();
        pi[d + 1] = top.iter().map(|&(_, w)| w).collect();

        // Marginalize one level at a time.
        for l in (0..=d).rev() {
            let mut acc: HashMap<Face, f64> = HashMap::new();
            let j_plus_2 = (l + 1) as f64 + 1.0; // faces above have l+1 vertices
            for (face, &w) in levels[l + 1].iter().zip(pi[l + 1].iter()) {
                for sub in face.subsets_of_size(l) {
                    *acc.entry(sub).or_insert(0.0) += w / j_plus_2;
                }
            }
            let mut entries: Vec<(Face, f64)> = acc.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            for &(ref f, w) in &entries {
                assert!(w > 0.0, "face {f} received zero marginal");
            }
            levels[l] = entries.iter().map(|(f, _)| f.clone()).collect();
            pi[l] = entries.iter().map(|&(_, w)| w).collect();
        }

        Self::from_levels(levels, pi)
    }

    /// Builds the complex where every facet has weight one.
    pub fn uniform(facets: Vec<Face>) -> Result<Self, ComplexError> {
        let n = facets.len();
        Self::build(facets, vec![1.0; n])
    }

    /// The complete complex: all `(d+1)`-subsets of `{0, .., n-1}` as
    /// facets, uniformly weighted.
    pub fn complete(n: u32, d: usize) -> Result<Self, ComplexError> {
        use itertools::Itertools;
        let facets: Vec<Face> = (0..n)
            .combinations(d + 1)
            .map(|vertices| Face { vertices })
            .collect();
        Self::uniform(facets)
    }

    /// Assembles a complex from explicit levels and distributions, checking
    /// every structural and numerical invariant.
    pub(crate) fn from_levels(
        levels: Vec<Vec<Face>>,
        pi: Vec<Vec<f64>>,
    ) -> Result<Self, ComplexError> {
        if levels.len() < 2 || levels.len() != pi.len() {
            return Err(ComplexError::Invalid("level/distribution shape mismatch".into()));
        }
        let d = levels.len() - 2;
        let mut index: Vec<HashMap<Face, usize>> = Vec::with_capacity(levels.len());
        for level in &levels {
            index.push(
                level
                    .iter()
                    .enumerate()
                    .map(|(i, f)| (f.clone(), i))
                    .collect(),
            );
        }
        let complex = WeightedComplex { d, levels, index, pi };
        complex.validate()?;
        Ok(complex)
    }

    /// Re-checks every invariant: level shapes, sorted faces, downward
    /// closure, purity, positivity, unit mass, and the per-entry marginal
    /// recursion at tolerance `tol::BUILD`.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let bad = |msg: String| Err(ComplexError::Invalid(msg));
        if self.levels[0].len() != 1 || !self.levels[0][0].is_empty() {
            return bad("level -1 must hold exactly the empty face".into());
        }
        for (l, (level, dist)) in self.levels.iter().zip(self.pi.iter()).enumerate() {
            if level.is_empty() {
                return bad(format!("level {} is empty", l as i32 - 1));
            }
            if level.len() != dist.len() {
                return bad(format!("level {} has {} faces but {} weights", l as i32 - 1, level.len(), dist.len()));
            }
            for f in level {
                if f.vertices.len() != l {
                    return bad(format!("face {f} stored at level {}", l as i32 - 1));
                }
            }
            if level.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("level {} is not sorted and duplicate-free", l as i32 - 1));
            }
            if dist.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
                return bad(format!("level {} has a non-positive weight", l as i32 - 1));
            }
            let sum: f64 = dist.iter().sum();
            if (sum - 1.0).abs() > tol::BUILD {
                return bad(format!("level {} mass {sum} is not 1", l as i32 - 1));
            }
        }
        // Downward closure, purity, and the marginal recursion, one level
        // step at a time.
        for l in 0..=self.d {
            let mut rebuilt: HashMap<&Face, f64> = HashMap::new();
            let j_plus_2 = (l + 1) as f64 + 1.0;
            for (face, &w) in self.levels[l + 1].iter().zip(self.pi[l + 1].iter()) {
                for sub in face.subsets_of_size(l) {
                    match self.index[l].get(&sub) {
                        Some(&i) => {
                            *rebuilt.entry(&self.levels[l][i]).or_insert(0.0) += w / j_plus_2;
                        }
                        None => {
                            return bad(format!(
                                "face {face} has subset {sub} missing at level {}",
                                l as i32 - 1
                            ));
                        }
                    }
                }
            }
            for (face, &w) in self.levels[l].iter().zip(self.pi[l].iter()) {
                match rebuilt.get(face) {
                    Some(&m) => {
                        if (m - w).abs() > tol::BUILD {
                            return bad(format!(
                                "marginal recursion residual {:e} at face {face}",
                                (m - w).abs()
                            ));
                        }
                    }
                    // Not a subset of any coface: a maximal face below the top.
                    None => {
                        return bad(format!(
                            "not pure: face {face} at level {} is maximal",
                            l as i32 - 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    fn level_slot(&self, j: i32) -> Result<usize, ComplexError> {
        if j < -1 || j > self.d as i32 {
            return Err(ComplexError::LevelOutOfRange(j, self.d as i32));
        }
        Ok((j + 1) as usize)
    }

    /// Faces of dimension `j`, sorted. Panics if `j` is out of `-1..=d`.
    pub fn level(&self, j: i32) -> &[Face] {
        let l = self.level_slot(j).expect("level out of range");
        &self.levels[l]
    }

    /// The distribution on level `j`, aligned with `level(j)`.
    pub fn pi(&self, j: i32) -> &[f64] {
        let l = self.level_slot(j).expect("level out of range");
        &self.pi[l]
    }

    pub fn level_size(&self, j: i32) -> usize {
        self.level(j).len()
    }

    pub fn index_of(&self, j: i32, face: &Face) -> Option<usize> {
        let l = self.level_slot(j).ok()?;
        self.index[l].get(face).copied()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index_of(face.dimension(), face).is_some()
    }

    /// The link of `alpha`: faces `b \ alpha` for `b` containing `alpha`,
    /// with level distributions given by conditioning on containing `alpha`.
    pub fn link(&self, alpha: &Face) -> Result<WeightedComplex, ComplexError> {
        let j = alpha.dimension();
        let ai = self
            .index_of(j, alpha)
            .ok_or_else(|| ComplexError::FaceNotPresent(alpha.to_string()))?;
        if j > self.d as i32 - 1 {
            return Err(ComplexError::DimensionTooHigh {
                face: alpha.to_string(),
                dim: j,
                max: self.d as i32 - 1,
            });
        }
        let pi_alpha = self.pi(j)[ai];
        let link_d = (self.d as i32 - j - 1) as usize;
        let a_size = alpha.vertices.len() as u64;

        let mut levels: Vec<Vec<Face>> = Vec::with_capacity(link_d + 2);
        let mut pi: Vec<Vec<f64>> = Vec::with_capacity(link_d + 2);
        for l in -1..=(link_d as i32) {
            let src = j + l + 1;
            let denom = binomial((j + l + 2) as u64, a_size) as f64 * pi_alpha;
            let mut faces = Vec::new();
            let mut dist = Vec::new();
            for (face, &w) in self.level(src).iter().zip(self.pi(src).iter()) {
                if face.contains(alpha) {
                    faces.push(face.difference(alpha));
                    dist.push(w / denom);
                }
            }
            levels.push(faces);
            pi.push(dist);
        }
        WeightedComplex::from_levels(levels, pi)
    }

    /// The weighted 1-skeleton of the link of `alpha` together with its
    /// random-walk matrix. Requires `dim(alpha) <= d - 2` so the link has
    /// edges.
    pub fn link_graph(&self, alpha: &Face) -> Result<LinkGraph, ComplexError> {
        let j = alpha.dimension();
        let ai = self
            .index_of(j, alpha)
            .ok_or_else(|| ComplexError::FaceNotPresent(alpha.to_string()))?;
        if j > self.d as i32 - 2 {
            return Err(ComplexError::DimensionTooHigh {
                face: alpha.to_string(),
                dim: j,
                max: self.d as i32 - 2,
            });
        }
        let pi_alpha = self.pi(j)[ai];
        let a_size = alpha.vertices.len() as u64;

        // Vertices and pi0 from the cofaces one level up.
        let mut vertices = Vec::new();
        let mut pi0 = Vec::new();
        let v_denom = binomial((j + 2) as u64, a_size) as f64 * pi_alpha;
        for (face, &w) in self.level(j + 1).iter().zip(self.pi(j + 1).iter()) {
            if face.contains(alpha) {
                let rest = face.difference(alpha);
                vertices.push(rest.vertices[0]);
                pi0.push(w / v_denom);
            }
        }
        let order: HashMap<u32, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        // Edges from the cofaces two levels up.
        let e_denom = binomial((j + 3) as u64, a_size) as f64 * pi_alpha;
        let mut edges = Vec::new();
        for (face, &w) in self.level(j + 2).iter().zip(self.pi(j + 2).iter()) {
            if face.contains(alpha) {
                let rest = face.difference(alpha);
                let a = order[&rest.vertices[0]];
                let b = order[&rest.vertices[1]];
                edges.push((a.min(b), a.max(b), w / e_denom));
            }
        }

        let n = vertices.len();
        let mut walk = DMatrix::<f64>::zeros(n, n);
        for &(a, b, w) in &edges {
            walk[(a, b)] += w / (2.0 * pi0[a]);
            walk[(b, a)] += w / (2.0 * pi0[b]);
        }

        let graph = LinkGraph {
            alpha: alpha.clone(),
            vertices,
            edges,
            pi0,
            walk,
        };
        graph.check();
        Ok(graph)
    }
}

/// The weighted 1-skeleton of a link: vertices with their stationary
/// distribution, edges with conditional weights, and the row-stochastic walk
/// matrix `M(x, y) = w({x,y}) / (2 pi0(x))`.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    alpha: Face,
    vertices: Vec<u32>,
    edges: Vec<(usize, usize, f64)>,
    pi0: Vec<f64>,
    walk: DMatrix<f64>,
}

impl LinkGraph {
    pub fn base(&self) -> &Face {
        &self.alpha
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Edges as (i, j, weight) with local indices into `vertices()`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn pi0(&self) -> &[f64] {
        &self.pi0
    }

    pub fn walk(&self) -> &DMatrix<f64> {
        &self.walk
    }

    /// The rank-one projector to constant functions, `1 * pi0^T`.
    pub fn projector(&self) -> DMatrix<f64> {
        let n = self.pi0.len();
        DMatrix::from_fn(n, n, |_, c| self.pi0[c])
    }

    /// Whether the 1-skeleton is connected (single vertex counts as
    /// connected).
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    fn check(&self) {
        let n = self.pi0.len();
        for r in 0..n {
            let sum: f64 = self.walk.row(r).iter().sum();
            assert!(
                (sum - 1.0).abs() <= tol::OPERATOR,
                "link walk of {} row {r} sums to {sum}",
                self.alpha
            );
        }
        for r in 0..n {
            // pi0^T M = pi0^T and detailed balance in one sweep.
            let mut stat = 0.0;
            for c in 0..n {
                stat += self.pi0[c] * self.walk[(c, r)];
                let fwd = self.pi0[r] * self.walk[(r, c)];
                let bwd = self.pi0[c] * self.walk[(c, r)];
                assert!(
                    (fwd - bwd).abs() <= tol::OPERATOR,
                    "link walk of {} is not reversible at ({r},{c})",
                    self.alpha
                );
            }
            assert!(
                (stat - self.pi0[r]).abs() <= tol::OPERATOR,
                "pi0 is not stationary for the link walk of {}",
                self.alpha
            );
        }
    }
}

/// Parses the facet file format: one facet per line as
/// `f <weight> <v1> <v2> ...`, where the weight field is recognized by
/// containing `.` or an exponent and defaults to 1.0 when omitted. Lines
/// starting with `#` and blank lines are ignored.
pub fn parse_facet_file(text: &str) -> Result<(Vec<Face>, Vec<f64>), ComplexError> {
    let mut facets = Vec::new();
    let mut weights = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        if tokens.next() != Some("f") {
            return Err(ComplexError::Parse {
                line,
                msg: format!("expected a line starting with 'f', got '{trimmed}'"),
            });
        }
        let rest: Vec<&str> = tokens.collect();
        if rest.is_empty() {
            return Err(ComplexError::Parse {
                line,
                msg: "facet line has no vertices".into(),
            });
        }
        let looks_like_weight =
            rest[0].contains('.') || rest[0].contains('e') || rest[0].contains('E');
        let (weight, verts) = if looks_like_weight {
            let w: f64 = rest[0].parse().map_err(|_| ComplexError::Parse {
                line,
                msg: format!("bad weight '{}'", rest[0]),
            })?;
            if !(w.is_finite() && w > 0.0) {
                return Err(ComplexError::Parse {
                    line,
                    msg: format!("weight must be positive, got {w}"),
                });
            }
            (w, &rest[1..])
        } else {
            (1.0, &rest[..])
        };
        if verts.is_empty() {
            return Err(ComplexError::Parse {
                line,
                msg: "facet line has no vertices".into(),
            });
        }
        let mut vs = Vec::with_capacity(verts.len());
        for t in verts {
            let v: u32 = t.parse().map_err(|_| ComplexError::Parse {
                line,
                msg: format!("bad vertex '{t}'"),
            })?;
            vs.push(v);
        }
        facets.push(Face::new(vs).map_err(|e| ComplexError::Parse {
            line,
            msg: e.to_string(),
        })?);
        weights.push(weight);
    }
    if facets.is_empty() {
        return Err(ComplexError::EmptyInput);
    }
    Ok((facets, weights))
}

/// Writes the facet file format read by [`parse_facet_file`]. Weights are
/// printed with a decimal point so they always parse back as weights.
pub fn write_facet_file(facets: &[Face], weights: &[f64]) -> String {
    let mut out = String::new();
    for (f, w) in facets.iter().zip(weights.iter()) {
        out.push_str(&format!("f {w:?}"));
        for v in f.vertices() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(v: &[u32]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    /// Independent recursive evaluation of the marginal recursion straight
    /// from the facet list, used as the oracle for the build path.
    fn marginal_oracle(facets: &[Face], weights: &[f64], target: &Face) -> f64 {
        let d = facets[0].dimension();
        let total: f64 = weights.iter().sum();
        fn go(facets: &[Face], pi_d: &[f64], alpha: &Face, d: i32) -> f64 {
            let j = alpha.dimension();
            if j == d {
                return facets
                    .iter()
                    .zip(pi_d.iter())
                    .find(|(f, _)| *f == alpha)
                    .map(|(_, &w)| w)
                    .unwrap_or(0.0);
            }
            // Collect candidate single-vertex extensions from the facets.
            let mut exts: Vec<u32> = Vec::new();
            for f in facets {
                if f.contains(alpha) {
                    for &v in f.vertices() {
                        if !alpha.contains_vertex(v) && !exts.contains(&v) {
                            exts.push(v);
                        }
                    }
                }
            }
            let mut sum = 0.0;
            for v in exts {
                sum += go(facets, pi_d, &alpha.extended(v), d);
            }
            sum / (j + 2) as f64
        }
        let pi_d: Vec<f64> = weights.iter().map(|w| w / total).collect();
        go(facets, &pi_d, target, d)
    }

    #[test]
    fn build_two_triangles() {
        let facets = vec![face(&[1, 2, 3]), face(&[1, 2, 4])];
        let weights = vec![1.0, 1.0];

        // Frozen values recomputed by the recursive oracle first.
        let oracle_12 = marginal_oracle(&facets, &weights, &face(&[1, 2]));
        let oracle_13 = marginal_oracle(&facets, &weights, &face(&[1, 3]));
        let oracle_v1 = marginal_oracle(&facets, &weights, &face(&[1]));
        let oracle_v3 = marginal_oracle(&facets, &weights, &face(&[3]));
        assert!((oracle_12 - 1.0 / 3.0).abs() < 1e-15);
        assert!((oracle_13 - 1.0 / 6.0).abs() < 1e-15);
        assert!((oracle_v1 - 1.0 / 3.0).abs() < 1e-15);
        assert!((oracle_v3 - 1.0 / 6.0).abs() < 1e-15);

        let x = WeightedComplex::build(facets, weights).unwrap();
        assert_eq!(x.dimension(), 2);
        assert_eq!(x.level_size(1), 5);
        let pi1 = |f: &Face| x.pi(1)[x.index_of(1, f).unwrap()];
        assert!((pi1(&face(&[1, 2])) - 1.0 / 3.0).abs() < tol::BUILD);
        for pair in [[1, 3], [1, 4], [2, 3], [2, 4]] {
            assert!((pi1(&face(&pair)) - 1.0 / 6.0).abs() < tol::BUILD);
        }
        let pi0 = |v: u32| x.pi(0)[x.index_of(0, &face(&[v])).unwrap()];
        assert!((pi0(1) - 1.0 / 3.0).abs() < tol::BUILD);
        assert!((pi0(2) - 1.0 / 3.0).abs() < tol::BUILD);
        assert!((pi0(3) - 1.0 / 6.0).abs() < tol::BUILD);
        assert!((pi0(4) - 1.0 / 6.0).abs() < tol::BUILD);
        assert_eq!(x.pi(-1), &[1.0]);
    }

    #[test]
    fn build_single_edge() {
        let x = WeightedComplex::build(vec![face(&[1, 2])], vec![1.0]).unwrap();
        assert_eq!(x.pi(1), &[1.0]);
        assert_eq!(x.pi(0), &[0.5, 0.5]);
    }

    #[test]
    fn build_two_disjoint_edges() {
        let x = WeightedComplex::uniform(vec![face(&[1, 2]), face(&[3, 4])]).unwrap();
        assert_eq!(x.pi(0), &[0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            WeightedComplex::uniform(vec![]),
            Err(ComplexError::EmptyInput)
        ));
        assert!(matches!(
            WeightedComplex::uniform(vec![face(&[1, 2]), face(&[3, 4, 5])]),
            Err(ComplexError::NonPure { .. })
        ));
        assert!(matches!(
            WeightedComplex::uniform(vec![face(&[1, 2]), face(&[2, 1])]),
            Err(ComplexError::DuplicateFacet(_))
        ));
        assert!(matches!(
            WeightedComplex::build(vec![face(&[1, 2])], vec![0.0]),
            Err(ComplexError::NonPositiveWeight(_))
        ));
        assert!(matches!(
            WeightedComplex::build(vec![face(&[1, 2])], vec![]),
            Err(ComplexError::WeightCountMismatch(..))
        ));
    }

    #[test]
    fn face_rejects_repeats() {
        assert!(matches!(
            Face::new(vec![1, 1, 2]),
            Err(ComplexError::RepeatedVertex(_))
        ));
    }

    #[test]
    fn link_of_empty_face_is_identity() {
        let x = WeightedComplex::build(
            vec![face(&[1, 2, 3]), face(&[1, 2, 4])],
            vec![0.7, 0.3],
        )
        .unwrap();
        let l = x.link(&Face::empty()).unwrap();
        assert_eq!(l.dimension(), x.dimension());
        for j in -1..=(x.dimension() as i32) {
            assert_eq!(l.level(j), x.level(j));
            for (a, b) in l.pi(j).iter().zip(x.pi(j).iter()) {
                assert!((a - b).abs() <= tol::BUILD);
            }
        }
    }

    #[test]
    fn link_of_edge_and_vertex() {
        let x = WeightedComplex::uniform(vec![face(&[1, 2, 3]), face(&[1, 2, 4])]).unwrap();

        let l12 = x.link(&face(&[1, 2])).unwrap();
        assert_eq!(l12.dimension(), 0);
        assert_eq!(l12.level(0), &[face(&[3]), face(&[4])]);
        assert_eq!(l12.pi(0), &[0.5, 0.5]);

        let l3 = x.link(&face(&[3])).unwrap();
        assert_eq!(l3.dimension(), 1);
        assert_eq!(l3.level(1), &[face(&[1, 2])]);
        assert!((l3.pi(1)[0] - 1.0).abs() <= tol::BUILD);
    }

    #[test]
    fn link_errors() {
        let x = WeightedComplex::uniform(vec![face(&[1, 2, 3])]).unwrap();
        assert!(matches!(
            x.link(&face(&[9])),
            Err(ComplexError::FaceNotPresent(_))
        ));
        assert!(matches!(
            x.link(&face(&[1, 2, 3])),
            Err(ComplexError::DimensionTooHigh { .. })
        ));
        assert!(matches!(
            x.link_graph(&face(&[1, 2])),
            Err(ComplexError::DimensionTooHigh { .. })
        ));
    }

    #[test]
    fn link_graph_of_complete_complex_is_complete_graph_walk() {
        let x = WeightedComplex::complete(4, 2).unwrap();
        let g = x.link_graph(&Face::empty()).unwrap();
        assert_eq!(g.vertices().len(), 4);
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r == c { 0.0 } else { 1.0 / 3.0 };
                assert!((g.walk()[(r, c)] - expect).abs() <= tol::BUILD);
            }
        }
        assert!(g.is_connected());
    }

    #[test]
    fn link_graph_of_vertex_is_path() {
        let x = WeightedComplex::uniform(vec![face(&[1, 2, 3]), face(&[1, 2, 4])]).unwrap();
        let g = x.link_graph(&face(&[1])).unwrap();
        // Path 3 - 2 - 4: the row of vertex 2 splits evenly.
        assert_eq!(g.vertices(), &[2, 3, 4]);
        let walk = g.walk();
        assert!((walk[(0, 1)] - 0.5).abs() <= tol::BUILD);
        assert!((walk[(0, 2)] - 0.5).abs() <= tol::BUILD);
        assert!((walk[(1, 0)] - 1.0).abs() <= tol::BUILD);
        assert!((walk[(2, 0)] - 1.0).abs() <= tol::BUILD);
    }

    #[test]
    fn link_graph_rows_are_stochastic() {
        let x = WeightedComplex::build(
            vec![face(&[0, 1, 2, 3]), face(&[1, 2, 3, 5]), face(&[0, 2, 3, 5])],
            vec![0.2, 1.3, 2.5],
        )
        .unwrap();
        for j in -1..=(x.dimension() as i32 - 2) {
            for alpha in x.level(j) {
                let g = x.link_graph(alpha).unwrap();
                for r in 0..g.vertices().len() {
                    let sum: f64 = g.walk().row(r).iter().sum();
                    assert!((sum - 1.0).abs() <= tol::OPERATOR);
                }
            }
        }
    }

    #[test]
    fn exhaustive_subset_sampling_matches_marginals() {
        let x = WeightedComplex::build(
            vec![face(&[1, 2, 3]), face(&[1, 2, 4]), face(&[2, 3, 4])],
            vec![0.5, 1.5, 1.0],
        )
        .unwrap();
        let d = x.dimension() as i32;
        for j in -1..=d {
            let denom = binomial((d + 1) as u64, (j + 1) as u64) as f64;
            for (i, alpha) in x.level(j).iter().enumerate() {
                let direct: f64 = x
                    .level(d)
                    .iter()
                    .zip(x.pi(d).iter())
                    .filter(|(beta, _)| beta.contains(alpha))
                    .map(|(_, &w)| w / denom)
                    .sum();
                assert!((direct - x.pi(j)[i]).abs() <= tol::BUILD);
            }
        }
    }

    #[test]
    fn uniform_top_gives_uniform_codim2_link_edges() {
        let x = WeightedComplex::complete(5, 3).unwrap();
        for alpha in x.level(x.dimension() as i32 - 2) {
            let g = x.link_graph(alpha).unwrap();
            let w0 = g.edges()[0].2;
            for &(_, _, w) in g.edges() {
                assert!((w - w0).abs() <= tol::BUILD);
            }
        }
    }

    #[test]
    fn link_of_link_matches_link_of_union() {
        let x = WeightedComplex::build(
            vec![
                face(&[0, 1, 2, 3]),
                face(&[0, 1, 2, 4]),
                face(&[1, 2, 3, 4]),
                face(&[0, 2, 3, 4]),
            ],
            vec![0.9, 1.1, 0.6, 1.4],
        )
        .unwrap();
        let alpha = face(&[2]);
        let tau = face(&[0]);
        let nested = x.link(&alpha).unwrap().link(&tau).unwrap();
        let direct = x.link(&alpha.union(&tau).unwrap()).unwrap();
        assert_eq!(nested.dimension(), direct.dimension());
        for j in -1..=(direct.dimension() as i32) {
            assert_eq!(nested.level(j), direct.level(j));
            for (a, b) in nested.pi(j).iter().zip(direct.pi(j).iter()) {
                assert!((a - b).abs() <= tol::BUILD);
            }
        }
    }

    #[test]
    fn facet_file_roundtrip() {
        let facets = vec![face(&[1, 2, 3]), face(&[1, 2, 4])];
        let weights = vec![0.25, 1.75];
        let text = write_facet_file(&facets, &weights);
        let (f2, w2) = parse_facet_file(&text).unwrap();
        assert_eq!(f2, facets);
        assert_eq!(w2, weights);
    }

    #[test]
    fn facet_file_weightless_and_comments() {
        let text = "# a comment\n\nf 1 2 3\nf 2.0 1 2 4\n";
        let (facets, weights) = parse_facet_file(text).unwrap();
        assert_eq!(facets, vec![face(&[1, 2, 3]), face(&[1, 2, 4])]);
        assert_eq!(weights, vec![1.0, 2.0]);
    }

    #[test]
    fn facet_file_errors_carry_line_numbers() {
        let err = parse_facet_file("f 1 2\nf x y\n").unwrap_err();
        match err {
            ComplexError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
        assert!(parse_facet_file("g 1 2\n").is_err());
        assert!(parse_facet_file("").is_err());
    }
}
