//! Family specs: `name[:arg[:arg...]]`, with missing arguments taken from
//! the `--n/--d/--p/--q/--seed` flags.

use eea_core::constructions::{
    cayley_cyclic, cayley_dihedral, cayley_sl2, cayley_symmetric, complete_algebra, cycle_algebra,
    direct_sum, kronecker_product, lps_algebra, petersen_algebra, random_regular_algebra,
};
use eea_core::graph::{stochastic_algebra_from_graph, underlying_graph};
use eea_core::{Error, EvolutionAlgebra, FieldDescriptor, ResourceCaps, Result, Scalar};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const FAMILIES: &[&str] = &[
    "cycle",
    "complete",
    "petersen",
    "random-regular",
    "lps",
    "cayley-cyclic",
    "cayley-dihedral",
    "cayley-symmetric",
    "cayley-sl2",
    "kron",
    "direct-sum",
];

/// Parameter fallbacks from the command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct Params {
    pub n: Option<u64>,
    pub d: Option<u64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub seed: Option<u64>,
}

/// Post-processing applied to a built family member.
#[derive(Clone, Copy, Debug, Default)]
pub struct Weights {
    /// Random-walk weights `1/deg` on the underlying graph.
    pub walk: bool,
    /// Unit diagonal.
    pub loops: bool,
}

/// A resolved family with its canonical description.
#[derive(Clone, Debug)]
pub struct Built {
    pub algebra: EvolutionAlgebra,
    pub provenance: Provenance,
    /// Factors of a Kronecker product, kept for the product audit.
    pub factors: Option<(EvolutionAlgebra, EvolutionAlgebra)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub family: String,
    pub descriptor: String,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub field: FieldDescriptor,
    pub walk: bool,
    pub loops: bool,
    pub tool: &'static str,
    pub version: &'static str,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

struct Spec<'a> {
    name: &'a str,
    args: Vec<u64>,
}

fn parse_spec(text: &str) -> Result<Spec<'_>> {
    let mut parts = text.split(':');
    let name = parts.next().unwrap_or_default();
    if !FAMILIES.contains(&name) {
        return Err(usage(format!("unknown family {name:?}; expected one of {}", FAMILIES.join(", "))));
    }
    let args = parts
        .map(|a| a.parse::<u64>().map_err(|_| usage(format!("bad family argument {a:?} in {text:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spec { name, args })
}

/// Pulls positional spec arguments, falling back to flags.
struct Args<'a> {
    spec: &'a Spec<'a>,
    used: usize,
    params: Map<String, Value>,
}

impl<'a> Args<'a> {
    fn take(&mut self, key: &str, flag: Option<u64>) -> Result<u64> {
        let value = match self.spec.args.get(self.used) {
            Some(v) => Some(*v),
            None => flag,
        };
        self.used += 1;
        let v = value.ok_or_else(|| usage(format!("family {} needs {key} (positional or --{key})", self.spec.name)))?;
        self.params.insert(key.into(), json!(v));
        Ok(v)
    }

    fn finish(self) -> Result<Map<String, Value>> {
        if self.spec.args.len() > self.used {
            return Err(usage(format!("too many arguments for family {}", self.spec.name)));
        }
        Ok(self.params)
    }
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

/// Builds a single (non-composite) family member.
fn build_simple(
    text: &str,
    params: &Params,
    field: FieldDescriptor,
    caps: &ResourceCaps,
) -> Result<(EvolutionAlgebra, Map<String, Value>, Option<u64>, String)> {
    let spec = parse_spec(text)?;
    let mut args = Args {
        spec: &spec,
        used: 0,
        params: Map::new(),
    };
    let mut seed = None;
    let algebra = match spec.name {
        "cycle" => cycle_algebra(to_usize(args.take("n", params.n)?), field)?,
        "complete" => complete_algebra(to_usize(args.take("n", params.n)?), field)?,
        "petersen" => petersen_algebra(field)?,
        "random-regular" => {
            let n = to_usize(args.take("n", params.n)?);
            let d = to_usize(args.take("d", params.d)?);
            let s = args.take("seed", params.seed.or(Some(0)))?;
            seed = Some(s);
            random_regular_algebra(n, d, s, field)?
        }
        "lps" => {
            let p = args.take("p", params.p)?;
            let q = args.take("q", params.q)?;
            lps_algebra(p, q, field, caps)?.algebra
        }
        "cayley-cyclic" => cayley_cyclic(to_usize(args.take("n", params.n)?), field, caps)?.algebra,
        "cayley-dihedral" => cayley_dihedral(to_usize(args.take("n", params.n)?), field, caps)?.algebra,
        "cayley-symmetric" => cayley_symmetric(to_usize(args.take("n", params.n)?), field, caps)?.algebra,
        "cayley-sl2" => cayley_sl2(args.take("p", params.p)?, field, caps)?.algebra,
        other => return Err(usage(format!("family {other} takes two member specs"))),
    };
    let params_map = args.finish()?;
    let descriptor = std::iter::once(spec.name.to_string())
        .chain(params_map.values().map(|v| v.to_string()))
        .collect::<Vec<_>>()
        .join(":");
    Ok((algebra, params_map, seed, descriptor))
}

/// `walk` and `loops` together give the lazy walk `1/(deg+1)` on closed
/// neighborhoods, which stays stochastic.
pub fn apply_weights(algebra: EvolutionAlgebra, weights: Weights, field: FieldDescriptor) -> Result<EvolutionAlgebra> {
    if weights.walk && weights.loops {
        if field.is_prime() {
            return Err(Error::PrimeFieldUnsupported("stochastic weights"));
        }
        let graph = underlying_graph(&algebra);
        let mut triplets = Vec::new();
        for v in 0..graph.n() {
            let w = Scalar::from_i64(field, graph.degree(v) as i64 + 1).inv()?;
            triplets.push((v, v, w.clone()));
            triplets.extend(graph.neighbors(v).iter().map(|&u| (v, u, w.clone())));
        }
        return EvolutionAlgebra::from_triplets(field, graph.n().max(1), triplets);
    }
    let algebra = if weights.walk {
        stochastic_algebra_from_graph(&underlying_graph(&algebra), field)?
    } else {
        algebra
    };
    if weights.loops {
        algebra.with_diagonal(&Scalar::one(field))
    } else {
        Ok(algebra)
    }
}

/// Resolves `source` (one spec, or `kron`/`direct-sum` followed by two).
pub fn build(
    source: &[String],
    params: &Params,
    weights: Weights,
    field: FieldDescriptor,
    caps: &ResourceCaps,
) -> Result<Built> {
    let (head, rest) = source.split_first().ok_or_else(|| usage("missing family"))?;
    let mut parameters = Map::new();
    let (algebra, seed, descriptor, family, factors) = match head.as_str() {
        "kron" | "direct-sum" => {
            let [left, right] = rest else {
                return Err(usage(format!("{head} needs exactly two member specs, e.g. `{head} cycle:4 cycle:4`")));
            };
            let (a, pa, sa, da) = build_simple(left, params, field, caps)?;
            let (b, pb, sb, db) = build_simple(right, params, field, caps)?;
            parameters.insert("left".into(), Value::Object(pa));
            parameters.insert("right".into(), Value::Object(pb));
            let (combined, factors) = if head == "kron" {
                (kronecker_product(&a, &b)?, Some((a, b)))
            } else {
                (direct_sum(&a, &b)?, None)
            };
            (combined, sa.or(sb), format!("{head}({da},{db})"), head.clone(), factors)
        }
        _ => {
            if !rest.is_empty() {
                return Err(usage(format!("unexpected arguments after {head}: {}", rest.join(" "))));
            }
            let (a, p, s, d) = build_simple(head, params, field, caps)?;
            parameters = p;
            let name = head.split(':').next().unwrap_or_default().to_string();
            (a, s, d, name, None)
        }
    };
    let algebra = apply_weights(algebra, weights, field)?;
    let factors = match factors {
        Some((a, b)) if !weights.walk && !weights.loops => Some((a, b)),
        _ => None,
    };
    let mut descriptor = descriptor;
    if weights.walk {
        descriptor.push_str("+walk");
    }
    if weights.loops {
        descriptor.push_str("+loops");
    }
    Ok(Built {
        algebra,
        provenance: Provenance {
            family,
            descriptor,
            parameters,
            seed,
            field,
            walk: weights.walk,
            loops: weights.loops,
            tool: "eea",
            version: env!("CARGO_PKG_VERSION"),
        },
        factors,
    })
}
