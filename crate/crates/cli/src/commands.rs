//! Subcommand implementations. Each writes its report to `out` and returns
//! whether everything it checked passed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use packlab::coxeter::weights;
use packlab::euclid::{realize, slice, Plane, Shape};
use packlab::lorentz::short_text;
use packlab::packing::{cross_section as section, packing_check, Budget};
use packlab::{LatticeVector, LorentzSpace, Matrix, PackingError};

use crate::scenario::{load_graph, Context, Scenario};
use crate::{svg, verify, CliError};

/// Budget and thread overrides shared by the scenario commands.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub depth: Option<usize>,
    pub max: Option<usize>,
    pub threads: Option<usize>,
}

impl Options {
    fn budget(&self, base: Budget) -> Budget {
        Budget {
            max_depth: self.depth.unwrap_or(base.max_depth),
            max_elements: self.max.unwrap_or(base.max_elements),
        }
    }

    fn threads(&self) -> usize {
        self.threads
            .filter(|&t| t > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

pub fn context(path: &str, opts: &Options) -> Result<Context, CliError> {
    let sc = Scenario::load(path)?;
    let budget = opts.budget(sc.budget);
    if budget.max_elements == 0 {
        return Err(CliError::Usage("--max must be positive".into()));
    }
    Context::new(sc, Some(budget), opts.threads())
}

fn io(e: std::io::Error) -> CliError {
    CliError::io("<output>", e)
}

fn write_matrix(out: &mut dyn Write, m: &Matrix) -> Result<(), CliError> {
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(short_text).collect();
        writeln!(out, "  {}", cells.join("\t")).map_err(io)?;
    }
    Ok(())
}

/// Gram matrix, determinant, signature, inverse and weights of a graph.
pub fn gram(path: &str, out: &mut dyn Write) -> Result<bool, CliError> {
    let g = load_graph(path, None)?;
    let j = g.gram_matrix()?;
    let det = j.det()?;
    let sig = j.signature()?;
    writeln!(out, "graph: {path}").map_err(io)?;
    writeln!(
        out,
        "nodes: {}",
        g.nodes().iter().map(|n| n.name.as_str()).collect::<Vec<_>>().join(" ")
    )
    .map_err(io)?;
    writeln!(out, "J:").map_err(io)?;
    write_matrix(out, &j)?;
    writeln!(out, "det: {}", short_text(&det)).map_err(io)?;
    writeln!(out, "signature: ({}, {}, {})", sig.positive, sig.negative, sig.zero).map_err(io)?;
    if det.is_zero() {
        writeln!(out, "lorentzian: no (degenerate)").map_err(io)?;
        return Ok(true);
    }
    writeln!(out, "J^-1:").map_err(io)?;
    write_matrix(out, &j.inverse()?)?;
    let lorentzian = sig.positive == 1 && sig.zero == 0;
    writeln!(out, "lorentzian: {}", if lorentzian { "yes" } else { "no" }).map_err(io)?;
    if lorentzian {
        let space = g.gram()?;
        let w = weights(&space)?;
        writeln!(out, "weights:").map_err(io)?;
        for (pos, &node) in g.basis().iter().enumerate() {
            writeln!(
                out,
                "  {}\t{}\t{}",
                g.nodes()[node].name,
                w.weights[pos],
                w.classes[pos]
            )
            .map_err(io)?;
        }
    }
    Ok(true)
}

/// Orbit enumeration with packing report; TSV dump to `tsv` when given.
pub fn orbit(path: &str, opts: &Options, tsv: Option<&Path>, out: &mut dyn Write) -> Result<bool, CliError> {
    let ctx = context(path, opts)?;
    let orbit = ctx.orbit()?;
    writeln!(out, "scenario: {}", ctx.scenario.name).map_err(io)?;
    writeln!(out, "generators: {}", orbit.generators.len()).map_err(io)?;
    writeln!(out, "seeds: {}", orbit.seeds.len()).map_err(io)?;
    writeln!(out, "depth: {}", orbit.depth).map_err(io)?;
    writeln!(out, "elements: {}", orbit.len()).map_err(io)?;
    writeln!(out, "truncated: {}", orbit.truncated).map_err(io)?;
    let mut pass = true;
    match packing_check(&ctx.space, &orbit.vectors()) {
        Ok(r) => {
            writeln!(out, "k: {}", r.k).map_err(io)?;
            if let Some(m) = &r.min_product {
                writeln!(out, "min_product: {m}").map_err(io)?;
            }
            writeln!(out, "tangent_pairs: {}", r.tangent_pairs).map_err(io)?;
            writeln!(out, "violations: {}", r.violations).map_err(io)?;
            for (i, j) in &r.violating_pairs {
                writeln!(out, "violation: {i} {j}").map_err(io)?;
            }
            pass = r.is_packing();
        }
        Err(PackingError::MixedNorms(a, b)) => {
            writeln!(out, "packing: not checked (norms {a} and {b})").map_err(io)?;
        }
        Err(e) => return Err(e.into()),
    }
    if ctx.infinity.is_some() {
        let frame = ctx.frame()?;
        let spheres = ctx.realize_orbit(&frame)?;
        let mut distinct: Vec<&packlab::Curvature> = Vec::new();
        for s in &spheres {
            if !distinct.iter().any(|c| c.same_as(&s.curvature)) {
                distinct.push(&s.curvature);
            }
        }
        writeln!(out, "distinct_curvatures: {}", distinct.len()).map_err(io)?;
    }
    if let Some(p) = tsv {
        std::fs::write(p, orbit.to_tsv(&ctx.space)).map_err(|e| CliError::io(p, e))?;
        writeln!(out, "tsv: {}", p.display()).map_err(io)?;
    }
    Ok(pass)
}

/// Runs every expectation of a scenario.
pub fn verify(path: &str, opts: &Options, out: &mut dyn Write) -> Result<bool, CliError> {
    let ctx = context(path, opts)?;
    let outcomes = verify::run(&ctx);
    for o in &outcomes {
        writeln!(out, "{o}").map_err(io)?;
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    writeln!(
        out,
        "{}: {} passed, {failed} failed",
        ctx.scenario.name,
        outcomes.len() - failed
    )
    .map_err(io)?;
    Ok(failed == 0)
}

/// TSV of the realized orbit in the scenario chart.
pub fn realize_tsv(path: &str, opts: &Options, out: &mut dyn Write) -> Result<bool, CliError> {
    let ctx = context(path, opts)?;
    let frame = ctx.frame()?;
    let spheres = ctx.realize_orbit(&frame)?;
    let dims: Vec<String> = (0..frame.dim()).map(|i| format!("x{i}")).collect();
    writeln!(
        out,
        "kind\tcurvature_exact\tcurvature_float\t{}\tradius_or_offset",
        dims.join("\t")
    )
    .map_err(io)?;
    for s in &spheres {
        writeln!(out, "{}", s.tsv_line()).map_err(io)?;
    }
    Ok(true)
}

fn slicing_plane(
    ctx: &Context,
    space: &LorentzSpace,
    frame: &packlab::Frame,
    spec: Option<&str>,
) -> Result<Plane, CliError> {
    let dim = frame.dim();
    let spec = spec.or(ctx.scenario.plane.as_deref());
    match spec {
        None | Some("coord") => {
            if dim < 2 {
                return Err(CliError::Usage("chart has fewer than two dimensions".into()));
            }
            Ok(Plane::coordinate(dim))
        }
        Some(name) => {
            let v = ctx.apply_transform(&ctx.eval(name)?)?;
            match realize(space, &v, frame)?.shape {
                Shape::Hyperplane { normal, offset } => Plane::from_hyperplane(&normal, offset)
                    .ok_or_else(|| CliError::Usage("slicing by a plane needs a three-dimensional chart".into())),
                Shape::Sphere { .. } => Err(CliError::Usage(format!(
                    "`{name}` is a sphere in this chart, not a plane"
                ))),
            }
        }
    }
}

/// SVG of the orbit sliced by a plane.
pub fn render(
    path: &str,
    opts: &Options,
    plane: Option<&str>,
    svg_out: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    let ctx = context(path, opts)?;
    let frame = ctx.frame()?;
    let spheres = ctx.realize_orbit(&frame)?;
    let plane = slicing_plane(&ctx, &ctx.space, &frame, plane)?;
    let items = slice(&spheres, &plane);
    let text = svg::render(&items);
    match svg_out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| CliError::io(p, e))?;
            writeln!(out, "spheres: {}", spheres.len()).map_err(io)?;
            writeln!(out, "slice_items: {}", items.len()).map_err(io)?;
            writeln!(out, "svg: {}", p.display()).map_err(io)?;
        }
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(true)
}

/// Classifies the orbit against the plane `h` and prints a derived
/// scenario for the section.
pub fn cross_section(path: &str, opts: &Options, h: &str, out: &mut dyn Write) -> Result<bool, CliError> {
    let ctx = context(path, opts)?;
    let hv = ctx.eval(h)?;
    let orbit = ctx.orbit()?;
    let vs = orbit.vectors();
    let cs = section(&ctx.space, &vs, &hv)?;
    writeln!(out, "h: {hv}").map_err(io)?;
    writeln!(out, "h.h: {}", short_text(&ctx.space.norm(&hv))).map_err(io)?;
    writeln!(out, "elements: {}", vs.len()).map_err(io)?;
    writeln!(out, "perpendicular: {}", cs.perpendicular.len()).map_err(io)?;
    writeln!(out, "tangent: {}", cs.tangent.len()).map_err(io)?;
    writeln!(out, "transverse: {}", cs.transverse.len()).map_err(io)?;
    writeln!(out, "missing: {}", cs.missing.len()).map_err(io)?;
    let mut counts: BTreeMap<LatticeVector, usize> = BTreeMap::new();
    for (_, n) in &cs.transverse {
        *counts.entry(n.clone()).or_default() += 1;
    }
    let names: Vec<String> = match &ctx.scenario.generators {
        Some(list) => list.clone(),
        None => {
            let g = &ctx.scenario.graph;
            g.basis().iter().map(|&i| g.nodes()[i].name.clone()).collect()
        }
    };
    let (kept_names, kept): (Vec<&str>, Vec<&LatticeVector>) = names
        .iter()
        .zip(&ctx.generators)
        .filter(|(_, gv)| ctx.space.product(gv, &hv).is_zero())
        .map(|(n, gv)| (n.as_str(), gv))
        .unzip();
    let families = projection_families(&ctx.space, &counts, &kept)?;
    writeln!(out, "families: {}", families.len()).map_err(io)?;
    for (i, fam) in families.iter().enumerate() {
        let spheres: usize = fam.iter().map(|n| counts[*n]).sum();
        writeln!(
            out,
            "family {i}: {}\tnorm {}\tprojections {}\tspheres {spheres}",
            fam[0],
            short_text(&ctx.space.norm(fam[0])),
            fam.len()
        )
        .map_err(io)?;
    }
    for (n, count) in &counts {
        writeln!(out, "projection: {n}\tfrom {count}").map_err(io)?;
    }
    writeln!(
        out,
        "# derived scenario; mirrors of the section outside the generator list must be added by hand"
    )
    .map_err(io)?;
    writeln!(out, "graph {}", ctx.scenario.graph_name).map_err(io)?;
    if !kept_names.is_empty() {
        writeln!(out, "generators {}", kept_names.join(", ")).map_err(io)?;
    }
    if let Some(&i) = cs.perpendicular.first() {
        writeln!(out, "seed {}", vs[i]).map_err(io)?;
    }
    for fam in &families {
        writeln!(out, "seed {}", fam[0]).map_err(io)?;
    }
    Ok(true)
}

/// Groups projections that are joined by a kept mirror, each family listed
/// in canonical order and led by its smallest member.
fn projection_families<'a>(
    space: &LorentzSpace,
    projections: &'a BTreeMap<LatticeVector, usize>,
    mirrors: &[&LatticeVector],
) -> Result<Vec<Vec<&'a LatticeVector>>, CliError> {
    let keys: Vec<&LatticeVector> = projections.keys().collect();
    let mut parent: Vec<usize> = (0..keys.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, n) in keys.iter().enumerate() {
        for m in mirrors {
            let image = space.reflect(m, n)?.canonicalize()?;
            if let Some(j) = keys.iter().position(|k| **k == image) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<&LatticeVector>> = BTreeMap::new();
    for (i, n) in keys.iter().enumerate() {
        groups.entry(root(&mut parent, i)).or_default().push(n);
    }
    Ok(groups.into_values().collect())
}
