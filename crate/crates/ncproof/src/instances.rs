//! Benchmark families: the functional pigeonhole principle (both pigeon
//! encodings), Tseitin mod-p graph constraints, and substitution
//! instances over fresh pair variables.

use thiserror::Error;

use crate::cpoly::{substitute_family, CPoly};
use crate::error::AlgebraError;
use crate::field::{FieldSpec, pow_mod};
use crate::order::VarId;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("need m > n ≥ 1 pigeons/holes, got m={0}, n={1}")]
    BadPigeonCounts(u32, u32),
    #[error("bad graph: {0}")]
    BadGraph(String),
    #[error("tseitin mod {0} needs a field with an order-{0} element, not {1}")]
    NoRootOfUnity(u64, String),
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A generated axiom family plus the bookkeeping a proof-file header
/// needs.
#[derive(Clone, Debug)]
pub struct Instance {
    pub nvars: u32,
    pub polys: Vec<CPoly>,
    /// Variable-numbering notes, emitted as comments.
    pub notes: Vec<String>,
    /// Set when the instance is (or may be) satisfiable.
    pub warning: Option<String>,
}

fn x(field: FieldSpec, i: u32) -> CPoly {
    CPoly::var(field, VarId::plain(i))
}

/// ¬FPHP(m, n): pigeons (1−x_{i,1})⋯(1−x_{i,n}), functional
/// x_{i,k}·x_{i,ℓ}, holes x_{i,k}·x_{j,k}. Variables flatten row-major:
/// x_{i,k} = x_{(i−1)·n + k}.
pub fn gen_fphp(m: u32, n: u32) -> Result<Instance, InstanceError> {
    gen_fphp_impl(m, n, false)
}

/// The low-degree variant: pigeons become 1 − (x_{i,1} + … + x_{i,n}).
pub fn gen_fphp_lowdeg(m: u32, n: u32) -> Result<Instance, InstanceError> {
    gen_fphp_impl(m, n, true)
}

fn gen_fphp_impl(m: u32, n: u32, low_degree: bool) -> Result<Instance, InstanceError> {
    if m <= n || n == 0 {
        return Err(InstanceError::BadPigeonCounts(m, n));
    }
    let field = FieldSpec::Rationals;
    let var = |i: u32, k: u32| x(field, (i - 1) * n + k);
    let one = CPoly::one(field);
    let mut polys = Vec::new();
    for i in 1..=m {
        let pigeon = if low_degree {
            let mut sum = CPoly::zero(field);
            for k in 1..=n {
                sum = sum.add(&var(i, k))?;
            }
            one.sub(&sum)?
        } else {
            let mut prod = one.clone();
            for k in 1..=n {
                prod = prod.mul(&one.sub(&var(i, k))?)?;
            }
            prod
        };
        polys.push(pigeon);
    }
    for i in 1..=m {
        for k in 1..=n {
            for l in k + 1..=n {
                polys.push(var(i, k).mul(&var(i, l))?);
            }
        }
    }
    for i in 1..=m {
        for j in i + 1..=m {
            for k in 1..=n {
                polys.push(var(i, k).mul(&var(j, k))?);
            }
        }
    }
    Ok(Instance {
        nvars: m * n,
        polys,
        notes: vec![format!("x_(i,k) -> x_((i-1)*{n} + k), pigeons i in 1..={m}, holes k in 1..={n}")],
        warning: None,
    })
}

/// A multigraph given by 1-based endpoints; parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub nvertices: u32,
    pub edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Parses an edge-list: one `u v` pair per line, `#` comments.
    pub fn parse(src: &str) -> Result<Graph, InstanceError> {
        let mut edges = Vec::new();
        let mut maxv = 0;
        for (i, raw) in src.lines().enumerate() {
            let text = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if text.is_empty() {
                continue;
            }
            let parts: Vec<&str> = text.split_whitespace().collect();
            let bad = || InstanceError::BadGraph(format!("line {}: `{text}`", i + 1));
            let [u, v] = parts.as_slice() else {
                return Err(bad());
            };
            let u: u32 = u.parse().map_err(|_| bad())?;
            let v: u32 = v.parse().map_err(|_| bad())?;
            if u == 0 || v == 0 {
                return Err(bad());
            }
            if u == v {
                return Err(InstanceError::BadGraph(format!(
                    "line {}: self-loop at vertex {u}",
                    i + 1
                )));
            }
            maxv = maxv.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(InstanceError::BadGraph("no edges".into()));
        }
        Ok(Graph {
            nvertices: maxv,
            edges,
        })
    }

    fn incident(&self, v: u32) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| *a == v || *b == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Incident edges with sign: +1 where v is the listed tail, −1 where
    /// it is the head. Orientation makes the vertex sums telescope, which
    /// is what turns a nonzero charge sum into a contradiction for odd p.
    fn incident_signed(&self, v: u32) -> Vec<(usize, i32)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, (a, b))| {
                if *a == v {
                    Some((i, 1))
                } else if *b == v {
                    Some((i, -1))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Tseitin mod-p constraints: one polynomial per vertex forcing the mod-p
/// sum of its incident edge values to equal the vertex charge.
///
/// For p = 2 the encoding is ±1-valued: Π(1 − 2x_e) − (−1)^charge over
/// any field of characteristic ≠ 2, and the linear form Σx_e + charge
/// over GF(2). For p > 2 each edge carries p−1 indicator variables
/// x_{e,a} (at most one set, enforced by pairwise products) and the
/// vertex constraint runs through an order-p element ω of the field, so
/// the field must be GF(q) with p | q−1.
pub fn gen_tseitin(
    graph: &Graph,
    p: u64,
    charges: &[u64],
    field: FieldSpec,
) -> Result<Instance, InstanceError> {
    if p < 2 {
        return Err(InstanceError::BadModulus);
    }
    if charges.len() != graph.nvertices as usize {
        return Err(InstanceError::BadGraph(format!(
            "{} charges for {} vertices",
            charges.len(),
            graph.nvertices
        )));
    }
    let charge_sum: u64 = charges.iter().map(|c| c % p).sum::<u64>() % p;
    let warning = (charge_sum == 0).then(|| {
        "charge sum is 0 mod p; the instance is satisfiable on each connected component".to_string()
    });

    let nedges = graph.edges.len() as u32;
    let mut polys = Vec::new();
    let mut notes = Vec::new();

    if p == 2 {
        notes.push("edge e -> variable x_e".to_string());
        match field {
            FieldSpec::Prime(2) => {
                for v in 1..=graph.nvertices {
                    let mut sum = CPoly::constant(field.from_i64(charges[v as usize - 1] as i64));
                    for e in graph.incident(v) {
                        sum = sum.add(&x(field, e as u32 + 1))?;
                    }
                    polys.push(sum);
                }
            }
            _ => {
                // (−1)^(Σ x_e) = (−1)^charge, written multiplicatively
                let one = CPoly::one(field);
                for v in 1..=graph.nvertices {
                    let mut prod = one.clone();
                    for e in graph.incident(v) {
                        let factor = one.sub(&x(field, e as u32 + 1).scale(&field.from_i64(2)))?;
                        prod = prod.mul(&factor)?;
                    }
                    let sign = if charges[v as usize - 1] % 2 == 0 { 1 } else { -1 };
                    polys.push(prod.sub(&CPoly::constant(field.from_i64(sign)))?);
                }
            }
        }
        return Ok(Instance {
            nvars: nedges,
            polys,
            notes,
            warning,
        });
    }

    // p > 2: indicator encoding over a field with an order-p element
    let FieldSpec::Prime(q) = field else {
        return Err(InstanceError::NoRootOfUnity(p, field.to_string()));
    };
    if (q - 1) % p != 0 {
        return Err(InstanceError::NoRootOfUnity(p, field.to_string()));
    }
    let omega = (2..q)
        .map(|a| pow_mod(a, (q - 1) / p, q))
        .find(|&w| w != 1)
        .ok_or(InstanceError::NoRootOfUnity(p, field.to_string()))?;
    notes.push(format!(
        "edge e, value a in 1..={}: indicator x_((e-1)*{} + a); omega = {omega}; \
         edges add their value at the listed tail and subtract it at the head",
        p - 1,
        p - 1
    ));
    let stride = (p - 1) as u32;
    let evar = |e: u32, a: u64| x(field, (e - 1) * stride + a as u32);
    let one = CPoly::one(field);
    for v in 1..=graph.nvertices {
        let mut prod = one.clone();
        for (e, sign) in graph.incident_signed(v) {
            // 1 + Σ_a (ω^(±a) − 1)·x_{e,a} equals ω^(±(edge value))
            let mut factor = one.clone();
            for a in 1..p {
                let exp = if sign > 0 { a } else { p - a };
                let coeff = field.from_i64(pow_mod(omega, exp, q) as i64).sub(&field.one());
                factor = factor.add(&evar(e as u32 + 1, a).scale(&coeff))?;
            }
            prod = prod.mul(&factor)?;
        }
        let target = field.from_i64(pow_mod(omega, charges[v as usize - 1] % p, q) as i64);
        polys.push(prod.sub(&CPoly::constant(target))?);
    }
    // at most one indicator per edge
    for e in 1..=nedges {
        for a in 1..p {
            for b in a + 1..p {
                polys.push(evar(e, a).mul(&evar(e, b))?);
            }
        }
    }
    Ok(Instance {
        nvars: nedges * stride,
        polys,
        notes,
        warning,
    })
}

/// Substitutes x_i ↦ f_i into the given axioms, with
/// f_i = Π_{j=1}^{deg} (y_{i,j} + z_{i,j}) on fresh pairwise-disjoint
/// variables: homogeneous, same degree, exponentially rank-hard products.
pub fn gen_subst_instance(qs: &[CPoly], deg: u32) -> Result<Instance, InstanceError> {
    let deg = deg.max(1);
    let n_in: u32 = qs.iter().map(|q| q.max_var_index()).max().unwrap_or(0);
    let field = qs
        .first()
        .map(|q| q.field())
        .unwrap_or(FieldSpec::Rationals);
    let block = 2 * deg;
    let fs: Vec<CPoly> = (1..=n_in)
        .map(|i| {
            let base = (i - 1) * block;
            let mut acc = CPoly::one(field);
            for j in 1..=deg {
                let y = x(field, base + 2 * j - 1);
                let z = x(field, base + 2 * j);
                acc = acc.mul(&y.add(&z)?)?;
            }
            Ok::<CPoly, AlgebraError>(acc)
        })
        .collect::<Result<_, _>>()?;
    let polys = substitute_family(qs, &fs)?;
    Ok(Instance {
        nvars: n_in * block,
        polys,
        notes: vec![format!(
            "x_i -> product of (y_(i,j) + z_(i,j)), j in 1..={deg}; \
             y_(i,j) = x_((i-1)*{block} + 2j-1), z_(i,j) = x_((i-1)*{block} + 2j)"
        )],
        warning: None,
    })
}
