//! Scenario files: a graph plus seeds, budgets, a perspective and the
//! expected values checked by `verify`.
//!
//! ```text
//! graph c2.cox              # relative to the scenario, else bundled
//! weights from 0            # index of the first weight name (w0 or w1)
//! cluster from 0            # index of the first cluster sphere name
//! generators b0, b2, b3     # default: every basis node
//! seed weight 9             # also `seed node nu` or `seed <expr>`
//! infinity weight 8         # point at infinity for realizations
//! reference <expr>          # vector F0 for the chart (optional)
//! origin <expr>             # sphere whose center is the chart origin
//! transform <expr>          # mirror applied before realizing
//! plane <node>              # default slicing plane for `render`
//! depth 4
//! max 200000
//! let s10 = R(b0, s6)
//! expect det -4
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use packlab::coxeter::{inverse_gram, TailPattern};
use packlab::euclid::{default_reference, make_frame, realize};
use packlab::packing::{orbit_with_threads, seed_cluster, Budget};
use packlab::{bundled, CoxeterGraph, EuclideanSphere, Frame, LatticeVector, LorentzSpace, OrbitSet};

use crate::expr::{split_top, Env};
use crate::CliError;

/// One `expect` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub line: usize,
    pub kind: String,
    pub body: String,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub dir: Option<PathBuf>,
    pub graph_name: String,
    pub graph: CoxeterGraph,
    pub weight_base: usize,
    pub cluster_base: usize,
    pub generators: Option<Vec<String>>,
    pub seeds: Vec<String>,
    pub infinity: Option<String>,
    pub reference: Option<String>,
    pub origin: Option<String>,
    pub transform: Option<String>,
    pub plane: Option<String>,
    pub lets: Vec<(String, String)>,
    pub budget: Budget,
    pub expectations: Vec<Expectation>,
}

/// Reads a file, falling back to the bundled copy of the same name.
pub fn read_source(
    path: &str,
    dir: Option<&Path>,
    bundled: fn(&str) -> Option<&'static str>,
) -> Result<(String, Option<PathBuf>), CliError> {
    let candidate = match dir {
        Some(d) if Path::new(path).is_relative() => d.join(path),
        _ => PathBuf::from(path),
    };
    match std::fs::read_to_string(&candidate) {
        Ok(text) => Ok((text, candidate.parent().map(Path::to_path_buf))),
        Err(e) => {
            let is_bare = !path.contains('/') && !path.contains('\\');
            match bundled(path) {
                Some(text) if is_bare && e.kind() == std::io::ErrorKind::NotFound => Ok((text.to_string(), None)),
                _ => Err(CliError::io(candidate, e)),
            }
        }
    }
}

/// Loads a graph file by path or bundled name.
pub fn load_graph(path: &str, dir: Option<&Path>) -> Result<CoxeterGraph, CliError> {
    let (text, _) = read_source(path, dir, bundled::graph)?;
    CoxeterGraph::parse(&text).map_err(|e| match e {
        packlab::CoxeterError::Syntax { line, msg } => CliError::Syntax {
            file: path.to_string(),
            line,
            msg,
        },
        other => other.into(),
    })
}

impl Scenario {
    /// Loads a scenario by path or bundled name.
    pub fn load(path: &str) -> Result<Scenario, CliError> {
        let (text, dir) = read_source(path, None, bundled::scenario)?;
        let name = Path::new(path)
            .file_name()
            .and_then(|s| s.to_str())
            .unwrap_or(path)
            .to_string();
        Scenario::parse(&name, &text, dir.as_deref())
    }

    pub fn parse(name: &str, text: &str, dir: Option<&Path>) -> Result<Scenario, CliError> {
        let syntax = |line: usize, msg: String| CliError::Syntax {
            file: name.to_string(),
            line,
            msg,
        };
        let mut graph = None;
        let mut sc = Scenario {
            name: name.to_string(),
            dir: dir.map(Path::to_path_buf),
            graph_name: String::new(),
            graph: CoxeterGraph::parse("node x -2").expect("placeholder graph"),
            weight_base: 0,
            cluster_base: 0,
            generators: None,
            seeds: Vec::new(),
            infinity: None,
            reference: None,
            origin: None,
            transform: None,
            plane: None,
            lets: Vec::new(),
            budget: Budget::default(),
            expectations: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            let need = |what: &str| {
                if rest.is_empty() {
                    Err(syntax(line, format!("`{key}` needs {what}")))
                } else {
                    Ok(())
                }
            };
            match key {
                "graph" => {
                    need("a file")?;
                    graph = Some(load_graph(rest, dir)?);
                    sc.graph_name = rest.to_string();
                }
                "weights" | "cluster" => {
                    let n = rest
                        .strip_prefix("from")
                        .map(str::trim)
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| syntax(line, format!("expected `{key} from <n>`")))?;
                    if key == "weights" {
                        sc.weight_base = n;
                    } else {
                        sc.cluster_base = n;
                    }
                }
                "generators" => {
                    need("a list")?;
                    sc.generators = Some(split_top(rest, ',').into_iter().map(str::to_string).collect());
                }
                "seed" => {
                    need("a vector")?;
                    sc.seeds.push(vector_spec(rest).map_err(|m| syntax(line, m))?);
                }
                "infinity" | "reference" | "origin" | "transform" => {
                    need("a vector")?;
                    let v = Some(vector_spec(rest).map_err(|m| syntax(line, m))?);
                    match key {
                        "infinity" => sc.infinity = v,
                        "reference" => sc.reference = v,
                        "origin" => sc.origin = v,
                        _ => sc.transform = v,
                    }
                }
                "plane" => {
                    need("a node")?;
                    sc.plane = Some(rest.to_string());
                }
                "depth" | "max" => {
                    let n: usize = rest
                        .parse()
                        .map_err(|_| syntax(line, format!("`{key}` needs a non-negative integer")))?;
                    if key == "depth" {
                        sc.budget.max_depth = n;
                    } else {
                        sc.budget.max_elements = n;
                    }
                }
                "let" => {
                    let (lhs, rhs) = rest
                        .split_once('=')
                        .ok_or_else(|| syntax(line, "expected `let <name> = <expr>`".into()))?;
                    let lhs = lhs.trim();
                    if lhs.is_empty() || !lhs.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
                        return Err(syntax(line, format!("bad name `{lhs}`")));
                    }
                    sc.lets.push((lhs.to_string(), rhs.trim().to_string()));
                }
                "expect" => {
                    need("a check")?;
                    let (kind, body) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                    if !crate::verify::KINDS.contains(&kind) {
                        return Err(syntax(line, format!("unknown expectation `{kind}`")));
                    }
                    sc.expectations.push(Expectation {
                        line,
                        kind: kind.to_string(),
                        body: body.trim().to_string(),
                    });
                }
                _ => return Err(syntax(line, format!("unknown directive `{key}`"))),
            }
        }
        sc.graph = graph.ok_or_else(|| syntax(0, "missing `graph` line".into()))?;
        Ok(sc)
    }
}

/// `weight k` becomes the weight name, `node x` becomes `x`, anything else
/// is an expression.
fn vector_spec(rest: &str) -> Result<String, String> {
    let (head, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    let tail = tail.trim();
    match head {
        "weight" => {
            if tail.parse::<usize>().is_ok() {
                Ok(format!("w{tail}"))
            } else if !tail.is_empty() {
                Ok(format!("weight_{tail}"))
            } else {
                Err("`weight` needs an index or node".into())
            }
        }
        "node" | "vector" => {
            if tail.is_empty() {
                Err(format!("`{head}` needs an argument"))
            } else {
                Ok(tail.to_string())
            }
        }
        _ => Ok(rest.to_string()),
    }
}

/// Evaluated scenario: space, named vectors and lazily computed orbit and
/// chart.
pub struct Context {
    pub scenario: Scenario,
    pub space: LorentzSpace,
    pub names: BTreeMap<String, LatticeVector>,
    pub generators: Vec<LatticeVector>,
    pub seeds: Vec<LatticeVector>,
    pub infinity: Option<LatticeVector>,
    pub tail: Option<TailPattern>,
    pub cluster: Option<Vec<LatticeVector>>,
    pub budget: Budget,
    pub threads: usize,
    orbit: OnceLock<Result<OrbitSet, String>>,
}

impl Context {
    pub fn new(scenario: Scenario, budget: Option<Budget>, threads: usize) -> Result<Context, CliError> {
        let g = &scenario.graph;
        let space = g.gram()?;
        let mut names = BTreeMap::new();
        for (i, node) in g.nodes().iter().enumerate() {
            names.insert(node.name.clone(), g.vector_of(&space, i)?);
        }
        let inv = inverse_gram(&space)?;
        for (pos, &node) in g.basis().iter().enumerate() {
            let w = LatticeVector::new(inv.row(pos).to_vec());
            names.insert(format!("weight_{}", g.nodes()[node].name), w.clone());
            names.entry(format!("w{}", pos + scenario.weight_base)).or_insert(w);
        }
        let tail = g.find_tail_pattern();
        let mut cluster = None;
        if let Some(t) = &tail {
            let chain: Vec<LatticeVector> = t
                .chain
                .iter()
                .map(|&i| g.vector_of(&space, i))
                .collect::<Result<_, _>>()?;
            let nu = g.vector_of(&space, t.nu)?;
            if let Ok(s) = seed_cluster(&space, &chain, &nu) {
                for (i, v) in s.iter().enumerate() {
                    names
                        .entry(format!("s{}", i + scenario.cluster_base))
                        .or_insert_with(|| v.clone());
                }
                cluster = Some(s);
            }
        }
        for (lhs, rhs) in &scenario.lets {
            let v = Env {
                space: &space,
                names: &names,
            }
            .eval_str(rhs)?;
            names.insert(lhs.clone(), v);
        }
        let env = Env {
            space: &space,
            names: &names,
        };
        let generators = match &scenario.generators {
            Some(list) => list.iter().map(|e| env.eval_str(e)).collect::<Result<_, _>>()?,
            None => g.generators(),
        };
        let seeds = scenario
            .seeds
            .iter()
            .map(|e| env.eval_str(e))
            .collect::<Result<_, _>>()?;
        let infinity = scenario.infinity.as_deref().map(|e| env.eval_str(e)).transpose()?;
        let budget = budget.unwrap_or(scenario.budget);
        Ok(Context {
            scenario,
            space,
            names,
            generators,
            seeds,
            infinity,
            tail,
            cluster,
            budget,
            threads,
            orbit: OnceLock::new(),
        })
    }

    pub fn env(&self) -> Env<'_> {
        Env {
            space: &self.space,
            names: &self.names,
        }
    }

    pub fn eval(&self, text: &str) -> Result<LatticeVector, CliError> {
        self.env().eval_str(text)
    }

    /// The orbit of the seeds under the generators, computed once.
    pub fn orbit(&self) -> Result<&OrbitSet, CliError> {
        let r = self.orbit.get_or_init(|| {
            if self.seeds.is_empty() {
                return Err(packlab::PackingError::NoSeeds.to_string());
            }
            orbit_with_threads(&self.space, &self.generators, &self.seeds, self.budget, self.threads)
                .map_err(|e| e.to_string())
        });
        r.as_ref().map_err(|e| CliError::Usage(e.clone()))
    }

    /// Chart for the point at infinity.
    pub fn frame(&self) -> Result<Frame, CliError> {
        let e = self
            .infinity
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("{}: no `infinity` line", self.scenario.name)))?;
        let f0 = match &self.scenario.reference {
            Some(r) => self.eval(r)?,
            None => default_reference(&self.space, e)?,
        };
        let origin = self
            .scenario
            .origin
            .as_deref()
            .map(|o| self.transformed(o))
            .transpose()?;
        Ok(make_frame(&self.space, e, &f0, origin.as_ref())?)
    }

    /// Applies the scenario transform, if any.
    pub fn apply_transform(&self, v: &LatticeVector) -> Result<LatticeVector, CliError> {
        match &self.scenario.transform {
            Some(t) => Ok(self.space.reflect(&self.eval(t)?, v)?),
            None => Ok(v.clone()),
        }
    }

    fn transformed(&self, text: &str) -> Result<LatticeVector, CliError> {
        self.apply_transform(&self.eval(text)?)
    }

    /// Realizations of the orbit in the scenario chart, in orbit order.
    pub fn realize_orbit(&self, frame: &Frame) -> Result<Vec<EuclideanSphere>, CliError> {
        self.orbit()?
            .elements()
            .iter()
            .map(|el| Ok(realize(&self.space, &self.apply_transform(&el.vector)?, frame)?))
            .collect()
    }
}
