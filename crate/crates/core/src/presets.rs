//! Built-in linear group actions.

use serde_json::Value;

use crate::error::{Result, WonderError};
use crate::group::{FiniteMatrixGroup, DEFAULT_GROUP_ORDER_CAP};
use crate::linalg::RatMatrix;
use crate::stratification::LinearGModel;

pub const PRESET_NAMES: &[&str] = &[
    "s3_perm3", "s3_std2", "s4_perm4", "d4_plane", "q8_rat4", "a5_perm5", "prod",
];

fn build(name: &str, dim: usize, gens: Vec<RatMatrix>) -> LinearGModel {
    let group = FiniteMatrixGroup::close_generators(dim, &gens, DEFAULT_GROUP_ORDER_CAP)
        .expect("preset generators close to a small finite group");
    LinearGModel::new(name, group)
}

/// Permutation of `0..n` given in cycle notation (0-based).
fn cycle(n: usize, cyc: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for w in 0..cyc.len() {
        p[cyc[w]] = cyc[(w + 1) % cyc.len()];
    }
    p
}

/// Permutation of `n` blocks of size `d`.
fn block_permutation(perm: &[usize], d: usize) -> RatMatrix {
    let full: Vec<usize> = (0..perm.len() * d).map(|k| perm[k / d] * d + k % d).collect();
    RatMatrix::permutation(&full)
}

/// `S_3` permuting coordinates of `Q^3`.
pub fn s3_perm3() -> LinearGModel {
    prod(3, 1, false).map(|m| m.renamed("s3_perm3")).expect("valid")
}

/// `S_3` on `Q^4` as two copies of its 2-dimensional irreducible representation.
pub fn s3_std2() -> LinearGModel {
    // standard representation in the basis e1 - e2, e2 - e3
    let t = RatMatrix::from_i64(&[&[-1, 1], &[0, 1]]);
    let c = RatMatrix::from_i64(&[&[0, -1], &[1, -1]]);
    build("s3_std2", 4, vec![t.direct_sum(&t), c.direct_sum(&c)])
}

/// `S_4` permuting coordinates of `Q^4`.
pub fn s4_perm4() -> LinearGModel {
    prod(4, 1, false).map(|m| m.renamed("s4_perm4")).expect("valid")
}

/// Symmetries of the square acting on `Q^2`.
pub fn d4_plane() -> LinearGModel {
    let r = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
    let s = RatMatrix::from_i64(&[&[1, 0], &[0, -1]]);
    build("d4_plane", 2, vec![r, s])
}

/// Quaternion group acting by left multiplication on `Q<1, i, j, k>`.
pub fn q8_rat4() -> LinearGModel {
    let li = RatMatrix::from_i64(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
    let lj = RatMatrix::from_i64(&[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]);
    build("q8_rat4", 4, vec![li, lj])
}

/// `A_5` permuting coordinates of `Q^5`.
pub fn a5_perm5() -> LinearGModel {
    prod(5, 1, true).map(|m| m.renamed("a5_perm5")).expect("valid")
}

/// `S_n` (or `A_n` when `alt`) permuting `n` blocks of `Q^d`.
pub fn prod(n: usize, d: usize, alt: bool) -> Result<LinearGModel> {
    if n == 0 || d == 0 {
        return Err(WonderError::PresetParams("prod needs n >= 1 and d >= 1".into()));
    }
    let mut perms = Vec::new();
    if alt {
        for k in 2..n {
            perms.push(cycle(n, &[0, 1, k]));
        }
    } else if n >= 2 {
        perms.push(cycle(n, &[0, 1]));
        perms.push(cycle(n, &(0..n).collect::<Vec<_>>()));
    }
    let gens = perms.iter().map(|p| block_permutation(p, d)).collect();
    let name = if alt {
        format!("prod({n},{d},alt)")
    } else {
        format!("prod({n},{d})")
    };
    Ok(build(&name, n * d, gens))
}

fn param(params: &Value, key: &str) -> Result<usize> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| WonderError::PresetParams(format!("missing integer parameter {key:?}")))
}

/// Builds a preset from its name and JSON parameters (only `prod` takes
/// parameters: `n`, `d` and optionally `"group": "sym" | "alt"`).
pub fn preset(name: &str, params: &Value) -> Result<LinearGModel> {
    match name {
        "s3_perm3" => Ok(s3_perm3()),
        "s3_std2" => Ok(s3_std2()),
        "s4_perm4" => Ok(s4_perm4()),
        "d4_plane" => Ok(d4_plane()),
        "q8_rat4" => Ok(q8_rat4()),
        "a5_perm5" => Ok(a5_perm5()),
        "prod" => {
            let n = param(params, "n")?;
            let d = param(params, "d")?;
            if n * d > 8 {
                return Err(WonderError::PresetParams(format!(
                    "prod({n},{d}) is beyond desk scale (n*d must be <= 8)"
                )));
            }
            let alt = match params.get("group").and_then(Value::as_str) {
                None | Some("sym") => false,
                Some("alt") => true,
                Some(other) => {
                    return Err(WonderError::PresetParams(format!(
                        "group must be \"sym\" or \"alt\", got {other:?}"
                    )))
                }
            };
            prod(n, d, alt)
        }
        _ => Err(WonderError::UnknownPreset {
            name: name.to_string(),
            available: PRESET_NAMES.join(", "),
        }),
    }
}

/// Parses the compact forms `s4_perm4`, `prod(3,2)` and `prod(5,1,alt)`.
pub fn preset_from_expr(expr: &str) -> Result<LinearGModel> {
    let expr = expr.trim();
    match expr.split_once('(') {
        None => preset(expr, &Value::Null),
        Some((name, rest)) => {
            let args = rest
                .strip_suffix(')')
                .ok_or_else(|| WonderError::PresetParams(format!("unbalanced parentheses in {expr:?}")))?;
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            let mut params = serde_json::Map::new();
            for (key, raw) in ["n", "d"].iter().zip(&parts) {
                let v: u64 = raw
                    .parse()
                    .map_err(|_| WonderError::PresetParams(format!("bad integer {raw:?} in {expr:?}")))?;
                params.insert(key.to_string(), Value::from(v));
            }
            if let Some(g) = parts.get(2) {
                params.insert("group".into(), Value::from(*g));
            }
            if parts.len() > 3 {
                return Err(WonderError::PresetParams(format!("too many arguments in {expr:?}")));
            }
            preset(name.trim(), &Value::Object(params))
        }
    }
}

/// The fixed roster used by the theorem-level suites.
pub fn roster() -> Vec<LinearGModel> {
    vec![
        s3_perm3(),
        s3_std2(),
        s4_perm4(),
        d4_plane(),
        q8_rat4(),
        a5_perm5(),
        prod(2, 1, false).expect("valid"),
        prod(3, 2, false).expect("valid"),
        prod(5, 1, true).expect("valid"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn orders() {
        assert_eq!(s3_perm3().group.order(), 6);
        assert_eq!(s3_std2().group.order(), 6);
        assert_eq!(s4_perm4().group.order(), 24);
        assert_eq!(d4_plane().group.order(), 8);
        assert_eq!(q8_rat4().group.order(), 8);
        assert_eq!(a5_perm5().group.order(), 60);
        assert_eq!(prod(2, 1, false).unwrap().group.order(), 2);
        assert_eq!(prod(3, 2, false).unwrap().group.dim(), 6);
    }

    #[test]
    fn s3_std2_is_block_diagonal() {
        let m = s3_std2();
        for g in m.group.matrices() {
            for i in 0..2 {
                for j in 2..4 {
                    assert!(g.get(i, j).is_zero() && g.get(j, i).is_zero());
                    assert_eq!(g.get(i, j - 2), g.get(i + 2, j));
                }
            }
        }
    }

    #[test]
    fn q8_entries_are_signed_units() {
        for g in q8_rat4().group.matrices() {
            for e in g.entries() {
                assert!(e.is_zero() || e.is_one() || (-e).is_one());
            }
        }
    }

    #[test]
    fn expressions() {
        assert_eq!(preset_from_expr("prod(3,2)").unwrap().name, "prod(3,2)");
        assert_eq!(preset_from_expr("prod(5, 1, alt)").unwrap().group.order(), 60);
        assert_eq!(preset_from_expr("d4_plane").unwrap().group.order(), 8);
        assert!(matches!(
            preset_from_expr("e8_lattice"),
            Err(WonderError::UnknownPreset { .. })
        ));
        assert!(preset_from_expr("prod(3,x)").is_err());
    }
}
