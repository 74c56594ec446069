//! Exact rational polyhedral cones.
//!
//! Cones are given by generators. Membership is decided by an exact simplex
//! that returns either nonnegative coefficients or a separating functional;
//! facets come from double description.

pub mod cdd;
pub mod dd;
pub mod integer;
pub mod linalg;
pub mod lp;
mod num;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::catalog::{Catalog, GroupEntry};
use crate::error::{Error, Result};
use crate::primecover::PrimeCondition;
use linalg::{dot, null_space, primitive, rref, sign_normalized, to_rational};
use lp::{Feasibility, LpOutcome, Simplex};

pub use dd::DdStats;
pub use integer::{minimal_integer_witness, Objective};

pub type Rational = num_rational::BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `p/q` in lowest terms, integers without `/1`.
pub fn render(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn render_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(render).collect()
}

/// Cone spanned by finitely many nonzero vectors.
///
/// Generators are stored as primitive integer vectors, sorted and free of
/// positive-multiple duplicates; zero vectors are dropped. Each generator
/// keeps the label of its first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    dim: usize,
    generators: Vec<Vec<Rational>>,
    labels: Vec<String>,
}

impl RationalCone {
    pub fn new(dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        let labelled = generators
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("g{i}"), g))
            .collect();
        Self::labelled(dim, labelled)
    }

    pub fn labelled(dim: usize, generators: Vec<(String, Vec<Rational>)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut kept: Vec<(Vec<BigInt>, String)> = Vec::new();
        for (label, g) in generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            if g.iter().all(Zero::is_zero) {
                continue;
            }
            let p = primitive(&g);
            if seen.insert(p.clone()) {
                kept.push((p, label));
            }
        }
        kept.sort();
        let (generators, labels) = kept
            .into_iter()
            .map(|(p, l)| (to_rational(&p), l))
            .unzip();
        Ok(Self { dim, generators, labels })
    }

    pub fn from_integer_rows(dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    /// Cone of degree vectors `(x_1, ..., x_D)` of the entries whose degrees
    /// are all at most `d`.
    pub fn of_degrees<'a>(entries: impl IntoIterator<Item = &'a GroupEntry>, d: u32) -> Self {
        let gens = entries
            .into_iter()
            .filter(|e| e.max_degree() <= d)
            .map(|e| {
                let v = e.degrees.to_vector(d).expect("degree within bound");
                (e.id.clone(), v.entries().iter().map(|&x| q(x as i64)).collect())
            })
            .collect();
        Self::labelled(d as usize, gens).expect("degree vectors have length d")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got });
        }
        Ok(())
    }

    /// Generator matrix as `dim` rows of length `len`.
    fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect()
    }

    /// The cone of the generators satisfying `keep`, with their indices.
    fn restricted(&self, keep: &dyn Fn(&Vec<Rational>) -> bool) -> (RationalCone, Vec<usize>) {
        let index: Vec<usize> = (0..self.len()).filter(|&i| keep(&self.generators[i])).collect();
        let cone = RationalCone {
            dim: self.dim,
            generators: index.iter().map(|&i| self.generators[i].clone()).collect(),
            labels: index.iter().map(|&i| self.labels[i].clone()).collect(),
        };
        (cone, index)
    }

    /// Combination `sum lambda_i g_i`.
    pub fn combine(&self, lambda: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.dim];
        for (l, g) in lambda.iter().zip(&self.generators) {
            if l.is_zero() {
                continue;
            }
            for (xi, gi) in x.iter_mut().zip(g) {
                if !gi.is_zero() {
                    *xi += l * gi;
                }
            }
        }
        x
    }
}

/// Facet description: `a . x >= 0` for each inequality, `a . x = 0` for
/// each equality.
///
/// Rows are primitive integer vectors. Equalities are a reduced echelon
/// basis of the orthogonal complement of the span with positive leading
/// entries; inequalities are reduced modulo the equalities. Both lists are
/// sorted, so the form depends only on the cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    pub inequalities: Vec<Vec<BigInt>>,
    pub equalities: Vec<Vec<BigInt>>,
}

impl HRep {
    pub fn contains(&self, x: &[Rational]) -> bool {
        let ok = |row: &Vec<BigInt>| dot(&to_rational(row), x);
        self.equalities.iter().all(|e| ok(e).is_zero())
            && self.inequalities.iter().all(|a| !ok(a).is_negative())
    }

    /// First row violated by `x`, with its signed value, for diagnostics.
    pub fn violated(&self, x: &[Rational]) -> Option<Vec<BigInt>> {
        for e in &self.equalities {
            let v = dot(&to_rational(e), x);
            if v.is_positive() {
                return Some(e.iter().map(|c| -c).collect());
            }
            if v.is_negative() {
                return Some(e.clone());
            }
        }
        self.inequalities
            .iter()
            .find(|a| dot(&to_rational(a), x).is_negative())
            .cloned()
    }
}

pub fn dd_facets(cone: &RationalCone) -> HRep {
    dd_facets_with_stats(cone).0
}

pub fn dd_facets_with_stats(cone: &RationalCone) -> (HRep, DdStats) {
    let d = cone.dim;
    let gens = &cone.generators;
    let (span, _) = rref(gens);
    let normal = null_space(gens, d);
    let (normal_rref, normal_pivots) = rref(&normal);
    let equalities: Vec<Vec<BigInt>> = {
        let mut rows: Vec<_> = normal_rref.iter().map(|r| sign_normalized(primitive(r))).collect();
        rows.sort();
        rows
    };
    if span.is_empty() {
        return (HRep { dim: d, inequalities: Vec::new(), equalities }, DdStats::default());
    }
    let basis: Vec<Vec<BigInt>> = span.iter().map(|r| primitive(r)).collect();
    let constraints: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            let gi = primitive(g);
            basis.iter().map(|b| linalg::dot_int(b, &gi)).collect()
        })
        .collect();
    let (rays, stats) = dd::extreme_rays(&constraints, basis.len());
    let mut inequalities: Vec<Vec<BigInt>> = rays
        .into_iter()
        .map(|t| {
            let mut a: Vec<Rational> = (0..d)
                .map(|j| {
                    let s: BigInt = t.iter().zip(&basis).map(|(ti, b)| ti * &b[j]).sum();
                    Rational::from_integer(s)
                })
                .collect();
            for (row, &pc) in normal_rref.iter().zip(&normal_pivots) {
                let f = a[pc].clone();
                if f.is_zero() {
                    continue;
                }
                for (aj, rj) in a.iter_mut().zip(row) {
                    *aj -= &f * rj;
                }
            }
            primitive(&a)
        })
        .collect();
    inequalities.sort();
    inequalities.dedup();
    (HRep { dim: d, inequalities, equalities }, stats)
}

/// Exact membership evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipCertificate {
    /// Nonnegative coefficients, one per generator, combining to the point.
    Inside { coefficients: Vec<Rational> },
    /// A functional nonnegative on every generator and negative on the point.
    Outside { functional: Vec<Rational> },
}

impl MembershipCertificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipCertificate::Inside { .. })
    }

    /// Re-checks the certificate from scratch.
    pub fn verify(&self, cone: &RationalCone, point: &[Rational]) -> bool {
        if point.len() != cone.dim {
            return false;
        }
        match self {
            MembershipCertificate::Inside { coefficients } => {
                coefficients.len() == cone.len()
                    && coefficients.iter().all(|l| !l.is_negative())
                    && cone.combine(coefficients) == point
            }
            MembershipCertificate::Outside { functional } => {
                functional.len() == cone.dim
                    && cone.generators.iter().all(|g| !dot(functional, g).is_negative())
                    && dot(functional, point).is_negative()
            }
        }
    }
}

pub fn member(cone: &RationalCone, point: &[Rational]) -> Result<MembershipCertificate> {
    cone.check_dim(point.len())?;
    let cert = member_unchecked(cone, point);
    assert!(cert.verify(cone, point), "membership certificate failed to verify");
    Ok(cert)
}

fn member_unchecked(cone: &RationalCone, point: &[Rational]) -> MembershipCertificate {
    let n = cone.len();
    if point.iter().all(Zero::is_zero) {
        return MembershipCertificate::Inside { coefficients: vec![Rational::zero(); n] };
    }
    if let Some(i) = generator_multiple(cone, point) {
        let g = &cone.generators[i];
        let k = g.iter().position(|v| !v.is_zero()).expect("nonzero generator");
        let mut coefficients = vec![Rational::zero(); n];
        coefficients[i] = &point[k] / &g[k];
        return MembershipCertificate::Inside { coefficients };
    }
    if n == 0 {
        // Any functional negative on the point separates it from {0}.
        let functional = point.iter().map(|v| -v.clone()).collect();
        return MembershipCertificate::Outside { functional };
    }
    match lp::feasible(&cone.columns(), point) {
        Feasibility::Feasible(coefficients) => MembershipCertificate::Inside { coefficients },
        Feasibility::Infeasible(functional) => MembershipCertificate::Outside { functional },
    }
}

/// Index of a generator that `point` is a positive multiple of.
fn generator_multiple(cone: &RationalCone, point: &[Rational]) -> Option<usize> {
    let p = primitive(point);
    let target = to_rational(&p);
    cone.generators.binary_search(&target).ok()
}

/// Outcome of a generator-wise inclusion test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetOutcome {
    Subset,
    /// A generator of the first cone outside the second, with the
    /// separating functional.
    Witness { index: usize, label: String, generator: Vec<Rational>, functional: Vec<Rational> },
}

impl SubsetOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SubsetOutcome::Subset)
    }
}

pub fn cone_subset(a: &RationalCone, b: &RationalCone) -> Result<SubsetOutcome> {
    b.check_dim(a.dim)?;
    for (index, g) in a.generators.iter().enumerate() {
        if let MembershipCertificate::Outside { functional } = member(b, g)? {
            return Ok(SubsetOutcome::Witness {
                index,
                label: a.labels[index].clone(),
                generator: g.clone(),
                functional,
            });
        }
    }
    Ok(SubsetOutcome::Subset)
}

/// A point in the intersection of several cones but outside another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceWitness {
    pub point: Vec<Rational>,
    /// Coefficients expressing `point` in each intersected cone.
    pub inside: Vec<Vec<Rational>>,
    /// Nonnegative on the excluded cone, negative on `point`.
    pub functional: Vec<Rational>,
}

pub fn verify_witness(intersect: &[RationalCone], exclude: &RationalCone, w: &DifferenceWitness) -> bool {
    w.inside.len() == intersect.len()
        && intersect.iter().zip(&w.inside).all(|(c, l)| {
            MembershipCertificate::Inside { coefficients: l.clone() }.verify(c, &w.point)
        })
        && MembershipCertificate::Outside { functional: w.functional.clone() }.verify(exclude, &w.point)
}

/// Searches for a point of `intersect[0] ∩ ... ∩ intersect[k]` outside `exclude`.
///
/// The search runs on a sequence of coordinate faces `{x_j = 0, j in J}`
/// that shrinks `J` one coordinate at a time down to the whole space, so
/// `None` is only returned after the unrestricted problem is settled. `J`
/// starts as every coordinate on which all generators share a sign, that
/// some generator of `exclude` uses and that no generator outside `exclude`
/// uses; coordinates used most often are released first. On such a face each
/// cone meets it in the cone of its generators lying there, so the problems
/// are smaller and a point found there is a witness for the full cones.
///
/// On each face the LP tests the functionals from [`candidate_functionals`].
/// When the first cone's generators all have positive coordinate sum, the LP
/// works on the slice of coordinate sum 1 and the witness is normalized to it.
pub fn difference_witness(intersect: &[RationalCone], exclude: &RationalCone) -> Result<Option<DifferenceWitness>> {
    let d = exclude.dim;
    for c in intersect {
        c.check_dim(d)?;
    }
    let full;
    let cones: &[RationalCone] = if intersect.is_empty() {
        full = whole_space(d);
        std::slice::from_ref(&full)
    } else {
        intersect
    };
    let mut outside: Vec<Vec<bool>> = Vec::with_capacity(cones.len());
    for c in cones {
        let mut flags = Vec::with_capacity(c.len());
        for g in &c.generators {
            flags.push(!member(exclude, g)?.is_inside());
        }
        if !flags.contains(&true) {
            return Ok(None);
        }
        outside.push(flags);
    }
    for zero in face_schedule(exclude, cones, &outside) {
        let on_face = |g: &Vec<Rational>| zero.iter().all(|&j| g[j].is_zero());
        let (face_exclude, _) = exclude.restricted(&on_face);
        let mut faces = Vec::with_capacity(cones.len());
        let mut index = Vec::with_capacity(cones.len());
        for c in cones {
            let (f, idx) = c.restricted(&on_face);
            faces.push(f);
            index.push(idx);
        }
        let face_outside: Vec<Vec<&Vec<Rational>>> = index
            .iter()
            .zip(cones)
            .zip(&outside)
            .map(|((idx, c), flags)| idx.iter().filter(|&&i| flags[i]).map(|&i| &c.generators[i]).collect())
            .collect();
        if face_outside.iter().any(Vec::is_empty) {
            continue;
        }
        let Some(lambda) = search_face(&faces, &face_exclude, &face_outside) else {
            continue;
        };
        let mut inside: Vec<Vec<Rational>> = cones
            .iter()
            .zip(&index)
            .zip(lambda)
            .map(|((c, idx), l)| {
                let mut full = vec![Rational::zero(); c.len()];
                for (&i, v) in idx.iter().zip(l) {
                    full[i] = v;
                }
                full
            })
            .collect();
        let mut point = cones[0].combine(&inside[0]);
        let total: Rational = point.iter().sum();
        if total.is_positive() && !total.is_one() {
            for v in point.iter_mut().chain(inside.iter_mut().flatten()) {
                *v /= &total;
            }
        }
        let MembershipCertificate::Outside { functional } = member(exclude, &point)? else {
            unreachable!("a point outside a face of the excluded cone lies outside the cone");
        };
        if intersect.is_empty() {
            inside.clear();
        }
        let w = DifferenceWitness { point, inside, functional };
        assert!(verify_witness(intersect, exclude, &w), "difference witness failed to verify");
        return Ok(Some(w));
    }
    Ok(None)
}

/// Zero sets for the faces searched by [`difference_witness`], ending with
/// the empty set.
fn face_schedule(exclude: &RationalCone, cones: &[RationalCone], outside: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let d = exclude.dim;
    let all = || exclude.generators.iter().chain(cones.iter().flat_map(|c| &c.generators));
    let mut free: Vec<(usize, usize)> = (0..d)
        .filter(|&j| {
            let one_sign = all().all(|g| !g[j].is_negative()) || all().all(|g| !g[j].is_positive());
            let used_outside = cones
                .iter()
                .zip(outside)
                .any(|(c, flags)| c.generators.iter().zip(flags).any(|(g, &o)| o && !g[j].is_zero()));
            one_sign && !used_outside
        })
        .map(|j| (exclude.generators.iter().filter(|g| !g[j].is_zero()).count(), j))
        .filter(|&(usage, _)| usage > 0)
        .collect();
    free.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    (0..=free.len())
        .map(|k| free[k..].iter().map(|&(_, j)| j).collect())
        .collect()
}

/// Coefficients, one vector per cone, of a point of the intersection outside
/// `exclude`, or `None` when there is no such point.
fn search_face(
    cones: &[RationalCone],
    exclude: &RationalCone,
    outside: &[Vec<&Vec<Rational>>],
) -> Option<Vec<Vec<Rational>>> {
    let system = CoupledSystem::new(cones);
    let mut probe = system.prober();
    candidate_functionals(exclude, cones, outside)
        .iter()
        .find_map(|f| system.probe(&mut probe, f))
        .map(|(lambda, _)| system.split(&lambda))
}

/// Functionals nonnegative on `exclude` such that the intersection meets
/// `f < 0` iff it is not contained in `exclude`.
///
/// If `f . x < 0` for a point `x` of the intersection, then every cone
/// contributes a generator outside `exclude` with `f . g < 0`. So when a cone
/// has a single outside generator `a`, `f . a <= 0` can be imposed before
/// enumerating extreme rays of the dual of `exclude`, and rays that are
/// nonnegative on some whole cone can be skipped. The equalities of
/// `exclude` come first, with both signs.
fn candidate_functionals(
    exclude: &RationalCone,
    cones: &[RationalCone],
    outside: &[Vec<&Vec<Rational>>],
) -> Vec<Vec<Rational>> {
    let d = exclude.dim;
    let cuts_every_cone = |f: &[Rational]| {
        cones
            .iter()
            .all(|c| c.generators.iter().any(|g| dot(f, g).is_negative()))
    };
    let mut out = Vec::new();
    for e in null_space(&exclude.generators, d) {
        let neg: Vec<Rational> = e.iter().map(|v| -v).collect();
        out.extend([e, neg].into_iter().filter(|f| cuts_every_cone(f)));
    }
    let (span, _) = rref(&exclude.generators);
    if span.is_empty() {
        return out;
    }
    let basis: Vec<Vec<BigInt>> = span.iter().map(|r| primitive(r)).collect();
    let coords = |g: &[Rational]| -> Vec<BigInt> {
        let g = primitive(g);
        basis.iter().map(|b| linalg::dot_int(b, &g)).collect()
    };
    let mut constraints: Vec<Vec<BigInt>> = outside
        .iter()
        .filter(|gens| gens.len() == 1)
        .map(|gens| coords(gens[0]).into_iter().map(|v| -v).collect())
        .collect();
    constraints.sort();
    constraints.dedup();
    constraints.extend(exclude.generators.iter().map(|g| coords(g)));
    let (rays, _) = dd::extreme_rays(&constraints, basis.len());
    let mut functionals: Vec<Vec<Rational>> = rays
        .into_iter()
        .map(|t| {
            (0..d)
                .map(|j| {
                    let s: BigInt = t.iter().zip(&basis).map(|(ti, b)| ti * &b[j]).sum();
                    Rational::from_integer(s)
                })
                .collect()
        })
        .filter(|f: &Vec<Rational>| cuts_every_cone(f))
        .collect();
    functionals.sort();
    out.extend(functionals);
    out
}

fn whole_space(d: usize) -> RationalCone {
    let mut gens = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1, -1] {
            let mut g = vec![Rational::zero(); d];
            g[i] = q(s);
            gens.push(g);
        }
    }
    RationalCone::new(d, gens).expect("unit vectors")
}

enum Prober {
    Slice(Box<Simplex>),
    /// The intersection is `{0}`.
    Zero,
    Each,
}

/// Variables `lambda_k >= 0` for every cone, constrained by
/// `G_0 lambda_0 = G_k lambda_k`.
struct CoupledSystem<'a> {
    cones: &'a [RationalCone],
    rows: Vec<Vec<Rational>>,
    offsets: Vec<usize>,
    width: usize,
}

impl<'a> CoupledSystem<'a> {
    fn new(cones: &'a [RationalCone]) -> Self {
        let mut offsets = Vec::with_capacity(cones.len());
        let mut width = 0;
        for c in cones {
            offsets.push(width);
            width += c.len();
        }
        let d = cones[0].dim;
        let mut rows = Vec::new();
        for (k, c) in cones.iter().enumerate().skip(1) {
            for i in 0..d {
                let mut row = vec![Rational::zero(); width];
                for (j, g) in cones[0].generators.iter().enumerate() {
                    row[j] = g[i].clone();
                }
                for (j, g) in c.generators.iter().enumerate() {
                    row[offsets[k] + j] = -g[i].clone();
                }
                rows.push(row);
            }
        }
        Self { cones, rows, offsets, width }
    }

    /// `f . (G_0 lambda_0)` as a row over all variables.
    fn lift(&self, f: &[Rational]) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.width];
        for (j, g) in self.cones[0].generators.iter().enumerate() {
            row[j] = dot(f, g);
        }
        row
    }

    /// LP state reused across probes: the simplex on the slice of coordinate
    /// sum 1 when that slice meets every ray, otherwise nothing.
    fn prober(&self) -> Prober {
        let summed = self.cones[0]
            .generators
            .iter()
            .all(|g| g.iter().sum::<Rational>().is_positive());
        if !summed {
            return Prober::Each;
        }
        let ones = vec![Rational::one(); self.cones[0].dim];
        let mut a = self.rows.clone();
        a.push(self.lift(&ones));
        let mut b = vec![Rational::zero(); a.len()];
        *b.last_mut().unwrap() = Rational::one();
        match Simplex::new(&a, &b) {
            (s, Feasibility::Feasible(_)) => Prober::Slice(Box::new(s)),
            (_, Feasibility::Infeasible(_)) => Prober::Zero,
        }
    }

    /// Looks for coefficients whose point is negative on `f`.
    fn probe(&self, prober: &mut Prober, f: &[Rational]) -> Option<(Vec<Rational>, Vec<Rational>)> {
        match prober {
            Prober::Zero => None,
            Prober::Slice(simplex) => {
                let LpOutcome::Optimal { x, value } =
                    simplex.minimize_below(&self.lift(f), Some(&Rational::zero()))
                else {
                    return None;
                };
                value.is_negative().then(|| (x, f.to_vec()))
            }
            Prober::Each => {
                let mut a = self.rows.clone();
                a.push(self.lift(f));
                let mut b = vec![Rational::zero(); a.len()];
                *b.last_mut().unwrap() = -Rational::one();
                match lp::feasible(&a, &b) {
                    Feasibility::Feasible(x) => Some((x, f.to_vec())),
                    Feasibility::Infeasible(_) => None,
                }
            }
        }
    }

    fn split(&self, lambda: &[Rational]) -> Vec<Vec<Rational>> {
        self.cones
            .iter()
            .zip(&self.offsets)
            .map(|(c, &o)| lambda[o..o + c.len()].to_vec())
            .collect()
    }
}

/// Cone of the simple rational reflection groups with degrees at most `d`.
pub fn lie_cone(catalog: &Catalog, d: u32) -> RationalCone {
    RationalCone::of_degrees(catalog.entries().iter().filter(|e| e.is_rational()), d)
}

/// Cone of the simple `Q_p`-reflection groups with degrees at most `d`.
pub fn prime_cone(catalog: &Catalog, p: u64, d: u32) -> RationalCone {
    RationalCone::of_degrees(catalog.entries().iter().filter(|e| e.admissible_at(p)), d)
}

/// Cone of the groups realizable at every prime satisfying `condition`.
pub fn class_cone(catalog: &Catalog, condition: &PrimeCondition, d: u32) -> RationalCone {
    RationalCone::of_degrees(
        catalog.entries().iter().filter(|e| condition.implies(&e.primes)),
        d,
    )
}

/// Ids added to the rational groups to form `K_Lin`.
pub const LIN_EXTRA: [&str; 3] = ["G(8,8,2)", "G(12,12,2)", "G(24,24,2)"];

/// `K_Lie` together with the dihedral groups `G(m,m,2)`, `m = 8, 12, 24`.
pub fn lin_cone(catalog: &Catalog, d: u32) -> RationalCone {
    lin_cone_with(catalog, d, &LIN_EXTRA)
}

pub fn lin_cone_with(catalog: &Catalog, d: u32, extra: &[&str]) -> RationalCone {
    RationalCone::of_degrees(
        catalog
            .entries()
            .iter()
            .filter(|e| e.is_rational() || extra.contains(&e.id.as_str())),
        d,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(dim: usize, rows: &[&[i64]]) -> RationalCone {
        RationalCone::from_integer_rows(dim, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(render(&Rational::new(6.into(), (-4).into())), "-3/2");
        assert_eq!(render(&q(7)), "7");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), Rational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn cone_normalizes_generators() {
        let c = cone(2, &[&[2, 4], &[1, 2], &[0, 0], &[1, 0]]);
        assert_eq!(c.generators(), &[qv(&[1, 0]), qv(&[1, 2])]);
        assert!(RationalCone::from_integer_rows(2, &[vec![1]]).is_err());
    }

    #[test]
    fn membership_examples() {
        let c = cone(2, &[&[1, 0], &[1, 1]]);
        let cert = member(&c, &qv(&[2, 1])).unwrap();
        assert_eq!(cert, MembershipCertificate::Inside { coefficients: qv(&[1, 1]) });
        assert!(member(&c, &qv(&[0, 0])).unwrap().is_inside());
        assert!(member(&c, &qv(&[3, 3])).unwrap().is_inside());
        let out = member(&c, &qv(&[0, 1])).unwrap();
        assert!(!out.is_inside());
        assert!(out.verify(&c, &qv(&[0, 1])));
        assert!(member(&c, &qv(&[1])).is_err());
    }

    #[test]
    fn facet_examples() {
        let h = dd_facets(&cone(2, &[&[1, 0], &[0, 1]]));
        assert_eq!(h.inequalities, ints(&[&[0, 1], &[1, 0]]));
        assert!(h.equalities.is_empty());
        let h = dd_facets(&cone(2, &[&[1, 0], &[1, 1], &[1, 2]]));
        assert_eq!(h.inequalities, ints(&[&[0, 1], &[2, -1]]));
        let h = dd_facets(&cone(1, &[&[1]]));
        assert_eq!(h.inequalities, ints(&[&[1]]));
    }

    #[test]
    fn facets_of_lower_dimensional_cone() {
        let h = dd_facets(&cone(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(h.equalities, ints(&[&[0, 0, 1]]));
        assert_eq!(h.inequalities, ints(&[&[0, 1, 0], &[1, 0, 0]]));
        let h = dd_facets(&RationalCone::new(2, vec![]).unwrap());
        assert_eq!(h.equalities, ints(&[&[0, 1], &[1, 0]]));
        // A half-plane: lineality along the first axis.
        let h = dd_facets(&cone(2, &[&[1, 0], &[-1, 0], &[0, 1]]));
        assert_eq!(h.inequalities, ints(&[&[0, 1]]));
    }

    #[test]
    fn subset_and_witness() {
        let a = cone(2, &[&[1, 0], &[1, 1]]);
        let b = cone(2, &[&[1, 0], &[0, 1]]);
        assert!(cone_subset(&a, &b).unwrap().holds());
        assert!(cone_subset(&a, &a).unwrap().holds());
        match cone_subset(&b, &a).unwrap() {
            SubsetOutcome::Witness { generator, .. } => assert_eq!(generator, qv(&[0, 1])),
            other => panic!("{other:?}"),
        }
        let w = difference_witness(std::slice::from_ref(&b), &a).unwrap().unwrap();
        assert!(verify_witness(std::slice::from_ref(&b), &a, &w));
        assert_eq!(w.point.iter().sum::<Rational>(), q(1));
        assert!(difference_witness(std::slice::from_ref(&a), &a).unwrap().is_none());
        assert!(difference_witness(&[a.clone(), b.clone()], &a).unwrap().is_none());
    }

    #[test]
    fn witness_without_normalization() {
        // The first cone has a generator with negative coordinate sum.
        let a = cone(2, &[&[-1, 0], &[0, 1]]);
        let b = cone(2, &[&[0, 1]]);
        let w = difference_witness(std::slice::from_ref(&a), &b).unwrap().unwrap();
        assert!(verify_witness(&[a], &b, &w));
        assert!(difference_witness(&[], &b).unwrap().is_some());
    }
}
