//! Evaluation of scenario expectations.

use std::fmt;

use packlab::coxeter::weights;
use packlab::euclid::curvature;
use packlab::packing::lattice::{determinant, index_from_dets};
use packlab::packing::{descent, limit_check, packing_check, tangency_clusters, witness_checks, DESCENT_BOUND};
use packlab::{Curvature, ExactScalar, LatticeVector, NormClass};

use crate::expr::{dual, preserves_lattice, split_top};
use crate::scenario::{load_graph, Context, Expectation};
use crate::CliError;

/// Every expectation kind understood by `verify`.
pub const KINDS: &[&str] = &[
    "det",
    "signature",
    "class",
    "norm",
    "product",
    "identity",
    "parallel",
    "dual",
    "cluster",
    "tail",
    "witnesses",
    "limit",
    "descent",
    "packing",
    "gramdet",
    "index",
    "graph-gram",
    "isomorphic",
    "no-planes",
    "ratio",
    "tangent",
    "tangent-ratio",
    "kissing",
    "equal-curvature",
    "quantum",
    "integral-ratio",
    "bertini-integral",
    "clique",
    "orbit-size",
    "words",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub line: usize,
    pub kind: String,
    pub body: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} line {}: {} {}", self.line, self.kind, self.body)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// Result of one check: pass flag and a short detail.
type Check = Result<(bool, String), CliError>;

pub fn run(ctx: &Context) -> Vec<Outcome> {
    ctx.scenario
        .expectations
        .iter()
        .map(|e| {
            let (pass, detail) = match check(ctx, e) {
                Ok(r) => r,
                Err(err) => (false, format!("error: {err}")),
            };
            Outcome {
                line: e.line,
                kind: e.kind.clone(),
                body: e.body.clone(),
                pass,
                detail,
            }
        })
        .collect()
}

fn bad(e: &Expectation, msg: &str) -> CliError {
    CliError::Usage(format!("line {}: `expect {}` {msg}", e.line, e.kind))
}

/// Splits `lhs = rhs` at the last top-level `=`.
fn equation(e: &Expectation) -> Result<(&str, &str), CliError> {
    let parts = split_top(&e.body, '=');
    if parts.len() != 2 || parts[0].is_empty() || parts[1].is_empty() {
        return Err(bad(e, "needs `<lhs> = <rhs>`"));
    }
    Ok((parts[0], parts[1]))
}

fn scalar(text: &str) -> Result<ExactScalar, CliError> {
    Ok(ExactScalar::parse(text)?)
}

fn list(ctx: &Context, text: &str) -> Result<Vec<LatticeVector>, CliError> {
    split_top(text, ',').into_iter().map(|t| ctx.eval(t)).collect()
}

fn compare<T: PartialEq + fmt::Display>(want: &T, got: &T) -> (bool, String) {
    if want == got {
        (true, format!("{got}"))
    } else {
        (false, format!("expected {want}, got {got}"))
    }
}

fn tangent(ctx: &Context, x: &LatticeVector, y: &LatticeVector) -> bool {
    let sp = &ctx.space;
    let p = sp.product(x, y);
    p.is_positive() && &p * &p == &sp.norm(x) * &sp.norm(y)
}

fn curv(ctx: &Context, v: &LatticeVector) -> Result<Curvature, CliError> {
    let e = ctx
        .infinity
        .as_ref()
        .ok_or_else(|| CliError::Usage("scenario has no `infinity` line".into()))?;
    Ok(curvature(&ctx.space, &ctx.apply_transform(v)?, e)?)
}

/// `|c(x) / c(ref)|` when it is an integer.
fn integer_ratio(x: &Curvature, r: &Curvature) -> Option<ExactScalar> {
    let sq = x.squared().checked_div(&r.squared()).ok()?;
    let root = sq.sqrt_in(1)?;
    root.is_integer().then_some(root)
}

fn check(ctx: &Context, e: &Expectation) -> Check {
    let sp = &ctx.space;
    let body = e.body.as_str();
    match e.kind.as_str() {
        "det" => Ok(compare(&scalar(body)?, &sp.gram().det()?)),
        "signature" => {
            let nums: Vec<usize> = body.split_whitespace().filter_map(|t| t.parse().ok()).collect();
            if nums.len() != 2 {
                return Err(bad(e, "needs `<positive> <negative>`"));
            }
            let sig = sp.gram().signature()?;
            Ok(compare(
                &format!("({}, {})", nums[0], nums[1]),
                &format!("({}, {})", sig.positive, sig.negative),
            ))
        }
        "class" => {
            let (x, c) = equation(e)?;
            let got = sp.norm_class(&ctx.eval(x)?);
            let want = match c {
                "point" => NormClass::Positive,
                "cusp" => NormClass::Null,
                "plane" => NormClass::Negative,
                _ => return Err(bad(e, "class must be point, cusp or plane")),
            };
            Ok(compare(&want, &got))
        }
        "norm" => {
            let (x, v) = equation(e)?;
            Ok(compare(&scalar(v)?, &sp.norm(&ctx.eval(x)?)))
        }
        "product" => {
            let (lhs, v) = equation(e)?;
            let xs = list(ctx, lhs)?;
            if xs.len() != 2 {
                return Err(bad(e, "needs two vectors"));
            }
            Ok(compare(&scalar(v)?, &sp.try_product(&xs[0], &xs[1])?))
        }
        "identity" => {
            let (lhs, rhs) = equation(e)?;
            Ok(compare(&ctx.eval(rhs)?, &ctx.eval(lhs)?))
        }
        "parallel" => {
            let xs = list(ctx, body)?;
            if xs.len() != 2 {
                return Err(bad(e, "needs two vectors"));
            }
            let ok = xs[0].is_positive_multiple_of(&xs[1]);
            Ok((
                ok,
                if ok {
                    String::new()
                } else {
                    format!("{} vs {}", xs[0], xs[1])
                },
            ))
        }
        "dual" => {
            let (x, rest) = equation(e)?;
            let (target, basis) = rest
                .split_once(':')
                .ok_or_else(|| bad(e, "needs `<x> = <b> : <basis>`"))?;
            let d = dual(sp, &ctx.eval(target.trim())?, &list(ctx, basis)?)?;
            let x = ctx.eval(x)?;
            let ok = x.is_positive_multiple_of(&d);
            Ok((
                ok,
                if ok {
                    String::new()
                } else {
                    format!("{x} is not a positive multiple of {d}")
                },
            ))
        }
        "cluster" => {
            let n: usize = body.parse().map_err(|_| bad(e, "needs a size"))?;
            let Some(s) = &ctx.cluster else {
                return Ok((false, "no tail pattern with a valid cluster".into()));
            };
            let k = -sp.norm(&s[0]);
            let mut ok = s.len() == n;
            for (i, a) in s.iter().enumerate() {
                ok &= -sp.norm(a) == k;
                for b in &s[i + 1..] {
                    ok &= sp.product(a, b) == k;
                }
            }
            Ok((ok, format!("{} spheres, k = {k}", s.len())))
        }
        "tail" => {
            let (nu, chain) = body.split_once(':').ok_or_else(|| bad(e, "needs `<nu> : <chain>`"))?;
            let Some(t) = &ctx.tail else {
                return Ok((false, "no tail pattern".into()));
            };
            let names = ctx.scenario.graph.nodes();
            let got = format!(
                "{} : {}",
                names[t.nu].name,
                t.chain
                    .iter()
                    .map(|&i| names[i].name.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let want = format!("{} : {}", nu.trim(), split_top(chain, ',').join(", "));
            Ok(compare(&want, &got))
        }
        "witnesses" => {
            let checks = witness_checks(sp)?;
            Ok((true, format!("{} identities", checks.len())))
        }
        "limit" => {
            let nums: Vec<&str> = body.split_whitespace().collect();
            if nums.len() != 2 {
                return Err(bad(e, "needs `<iterations> <bound>`"));
            }
            let k: usize = nums[0].parse().map_err(|_| bad(e, "bad iteration count"))?;
            let bound = scalar(nums[1])?;
            let report = limit_check(sp, k)?;
            let worst = ExactScalar::from_rational(report.max_scaled_residual());
            let ok = report.descent.succeeded() && worst.cmp_value(&bound).is_le();
            Ok((
                ok,
                format!(
                    "max k*residual {:.4}, descent {}",
                    worst.to_f64(),
                    if report.descent.succeeded() { "ok" } else { "failed" }
                ),
            ))
        }
        "descent" => {
            let v = ctx.eval(body)?;
            let out = descent(sp, &v, &ctx.generators, DESCENT_BOUND)?;
            Ok((out.succeeded(), format!("{out:?}")))
        }
        "packing" => {
            let k = scalar(body)?;
            let orbit = ctx.orbit()?;
            let r = packing_check(sp, &orbit.vectors())?;
            let min = r.min_product.clone().unwrap_or_else(ExactScalar::zero);
            let ok = r.violations == 0 && r.k == k && (r.elements < 2 || min == k);
            Ok((
                ok,
                format!(
                    "{} elements, k = {}, min product {min}, {} violations, {} tangent pairs",
                    r.elements, r.k, r.violations, r.tangent_pairs
                ),
            ))
        }
        "gramdet" => {
            let (lhs, v) = equation(e)?;
            Ok(compare(&scalar(v)?, &determinant(sp, &list(ctx, lhs)?)?))
        }
        "index" => {
            let (lhs, v) = equation(e)?;
            let (a, b) = lhs
                .split_once('|')
                .ok_or_else(|| bad(e, "needs `<lattice> | <sublattice> = n`"))?;
            let da = determinant(sp, &list(ctx, a)?)?;
            let db = determinant(sp, &list(ctx, b)?)?;
            let idx = index_from_dets(&da, &db)?;
            Ok(compare(&v.trim().to_string(), &idx.to_string()))
        }
        "graph-gram" => {
            let (file, vs) = body
                .split_once(':')
                .ok_or_else(|| bad(e, "needs `<file> : <vectors>`"))?;
            let g = load_graph(file.trim(), ctx.scenario.dir.as_deref())?;
            let want = g.gram_matrix()?;
            let got = sp.gram_of(&list(ctx, vs)?)?;
            Ok((want == got, format!("{} x {}", got.rows(), got.cols())))
        }
        "isomorphic" => {
            let (file, names) = body.split_once(':').ok_or_else(|| bad(e, "needs `<file> : <nodes>`"))?;
            let g = load_graph(file.trim(), ctx.scenario.dir.as_deref())?;
            let names: Vec<&str> = split_top(names, ',');
            let sub = ctx.scenario.graph.subgraph_by_names(&names)?;
            Ok((sub.is_isomorphic(&g), String::new()))
        }
        "no-planes" => {
            let w = weights(sp)?;
            let planes = w.classes.iter().filter(|c| **c == NormClass::Negative).count();
            Ok((planes == 0, format!("{planes} plane weights")))
        }
        "ratio" => {
            let (lhs, t) = equation(e)?;
            let xs = list(ctx, lhs)?;
            if xs.len() != 2 {
                return Err(bad(e, "needs two vectors"));
            }
            let (a, b) = (curv(ctx, &xs[0])?, curv(ctx, &xs[1])?);
            let ok = a.ratio_equals(&b, &scalar(t)?);
            Ok((ok, format!("{:.6}", a.to_f64() / b.to_f64())))
        }
        "tangent" => {
            let (lhs, n) = equation(e)?;
            let xs = list(ctx, lhs)?;
            let count = ctx
                .orbit()?
                .elements()
                .iter()
                .filter(|el| xs.iter().all(|x| tangent(ctx, &el.vector, x)))
                .count();
            Ok(compare(&n.to_string(), &count.to_string()))
        }
        "tangent-ratio" => {
            let (r, rest) = equation(e)?;
            let (t, xs) = rest
                .split_once(':')
                .ok_or_else(|| bad(e, "needs `<ref> = <t> : <vectors>`"))?;
            let t = scalar(t.trim())?;
            let xs = list(ctx, xs)?;
            let rc = curv(ctx, &ctx.eval(r)?)?;
            let mut count = 0;
            let mut ok = true;
            for el in ctx.orbit()?.elements() {
                if xs.iter().all(|x| tangent(ctx, &el.vector, x)) {
                    count += 1;
                    ok &= curv(ctx, &el.vector)?.ratio_equals(&rc, &t);
                }
            }
            Ok((ok && count > 0, format!("{count} spheres")))
        }
        "kissing" => {
            let (x, n) = equation(e)?;
            let x = ctx.eval(x)?;
            let count = ctx
                .orbit()?
                .elements()
                .iter()
                .filter(|el| tangent(ctx, &el.vector, &x))
                .count();
            Ok(compare(&n.to_string(), &count.to_string()))
        }
        "equal-curvature" => {
            let orbit = ctx.orbit()?;
            let first = curv(ctx, &orbit.elements()[0].vector)?;
            let mut ok = true;
            for el in orbit.elements() {
                ok &= curv(ctx, &el.vector)?.same_as(&first);
            }
            Ok((ok, format!("{} elements, curvature {first}", orbit.len())))
        }
        "quantum" => {
            let (seed, unit) = equation(e)?;
            let seed: usize = seed.parse().map_err(|_| bad(e, "needs a seed index"))?;
            let unit = scalar(unit)?;
            let mut count = 0;
            let mut ok = true;
            for el in ctx.orbit()?.elements().iter().filter(|el| el.seed == seed) {
                count += 1;
                let m2 = curv(ctx, &el.vector)?.squared().checked_div(&unit)?;
                ok &= m2.sqrt_in(1).is_some_and(|m| m.is_integer());
            }
            Ok((ok && count > 0, format!("{count} spheres")))
        }
        "integral-ratio" => {
            let rc = curv(ctx, &ctx.eval(body)?)?;
            let mut ok = true;
            let mut largest = ExactScalar::zero();
            for el in ctx.orbit()?.elements() {
                match integer_ratio(&curv(ctx, &el.vector)?, &rc) {
                    Some(m) => {
                        if m.cmp_value(&largest).is_gt() {
                            largest = m;
                        }
                    }
                    None => ok = false,
                }
            }
            Ok((ok, format!("largest ratio {largest}")))
        }
        "bertini-integral" => {
            let (ab, basis) = body
                .split_once(':')
                .ok_or_else(|| bad(e, "needs `<A>, <B> : <basis>`"))?;
            let ab = list(ctx, ab)?;
            if ab.len() != 2 {
                return Err(bad(e, "needs two null vectors"));
            }
            let basis = list(ctx, basis)?;
            let m = preserves_lattice(sp, &basis, |x| sp.bertini(&ab[0], &ab[1], x))?;
            Ok((m.is_integral(), String::new()))
        }
        "clique" => {
            let n: usize = body.parse().map_err(|_| bad(e, "needs a size"))?;
            let vs = ctx.orbit()?.vectors();
            let sample: Vec<usize> = (0..vs.len()).step_by((vs.len() / 50).max(1)).collect();
            let res = tangency_clusters(sp, &vs, n, &sample)?;
            let found = res.iter().filter(|r| r.clique.is_some()).count();
            Ok((
                found > 0,
                format!("{found} of {} sampled spheres in a {n}-clique", res.len()),
            ))
        }
        "orbit-size" => {
            let orbit = ctx.orbit()?;
            Ok(compare(&body.to_string(), &orbit.len().to_string()))
        }
        "words" => {
            let ok = ctx.orbit()?.verify_words(sp)?;
            Ok((ok, String::new()))
        }
        _ => Err(bad(e, "is not a known expectation")),
    }
}
