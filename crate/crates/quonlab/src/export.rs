//! Matrix, coefficient and Clebsch-Gordan table dumps.

use std::collections::BTreeMap;
use std::fmt::Display;

use quon_core::number::SeriesCoefficients;
use quon_core::su2::{cg_table, SignedSurd};
use quon_core::{FockSpace, JLevel, ModeIndex, Scalar};
use serde::Serialize;
use serde_json::{json, Value};

use crate::numeric::BackendKind;

/// Exact values as `"p/q"` strings, floats as JSON numbers.
pub fn scalar_json<S: Scalar + Display>(x: &S) -> Value {
    if S::EXACT {
        Value::String(x.to_string())
    } else {
        json!(x.to_f64())
    }
}

fn q_label<S: Scalar + Display>(q: &S) -> String {
    if S::EXACT {
        q.to_string()
    } else {
        format!("{:?}", q.to_f64())
    }
}

fn backend_of<S: Scalar>() -> BackendKind {
    if S::EXACT {
        BackendKind::Exact
    } else {
        BackendKind::Float
    }
}

/// The Gram matrix of sector `n` with its word labels.
pub fn gram_json<S: Scalar + Display>(space: &FockSpace<S>, n: usize) -> Value {
    let sector = space.sector(n);
    let g = space.gram_matrix(n).matrix.to_dense();
    json!({
        "j": space.level().to_string(),
        "n": n,
        "q": q_label(space.q().value()),
        "backend": backend_of::<S>(),
        "words": sector.words().map(|w| w.to_string()).collect::<Vec<_>>(),
        "matrix": g.iter().map(|row| row.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `# j=…, n=…, q=…, backend=…` header, a row of word labels, then one row
/// per word.
pub fn gram_csv<S: Scalar + Display>(space: &FockSpace<S>, n: usize) -> String {
    let sector = space.sector(n);
    let words: Vec<String> = sector.words().map(|w| w.to_string()).collect();
    let g = space.gram_matrix(n).matrix.to_dense();
    let mut out = format!(
        "# j={}, n={}, q={}, backend={}\n",
        space.level(),
        n,
        q_label(space.q().value()),
        backend_of::<S>()
    );
    out.push_str("word");
    for w in &words {
        out.push(',');
        out.push_str(&csv_field(w));
    }
    out.push('\n');
    for (w, row) in words.iter().zip(&g) {
        out.push_str(&csv_field(w));
        for x in row {
            out.push(',');
            out.push_str(&if S::EXACT {
                x.to_string()
            } else {
                format!("{:?}", x.to_f64())
            });
        }
        out.push('\n');
    }
    out
}

/// Coefficients keyed by order, then by the one-based permutation in
/// one-line notation (`"2 1"`).
pub fn coefficients_json<S: Scalar + Display>(c: &SeriesCoefficients<S>) -> Value {
    let mut coefficients: BTreeMap<String, BTreeMap<String, Value>> = BTreeMap::new();
    let mut solves = Vec::new();
    for order in c.orders() {
        let table = coefficients.entry(order.order.to_string()).or_default();
        for x in &order.coefficients {
            let key = x
                .permutation
                .iter()
                .map(|p| (p + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ");
            table.insert(key, scalar_json(&x.value));
        }
        solves.push(json!({
            "order": order.order,
            "alphabet": order.alphabet,
            "rank": order.rank,
            "free_parameters": order.free_parameters,
        }));
    }
    json!({
        "q": q_label(c.q().value()),
        "backend": backend_of::<S>(),
        "max_order": c.max_order(),
        "solves": solves,
        "coefficients": coefficients,
    })
}

#[derive(Serialize)]
struct SignedSurdJson {
    sign: i8,
    radicand: String,
}

impl From<&SignedSurd> for SignedSurdJson {
    fn from(s: &SignedSurd) -> Self {
        SignedSurdJson {
            sign: s.sign,
            radicand: s.radicand.to_string(),
        }
    }
}

/// All non-zero `⟨j₁ m₁; j₂ m₂ | J M⟩` as `{"sign": ±1, "radicand": "p/q"}`.
pub fn cg_json(twice_j1: u32, twice_j2: u32) -> Value {
    let half = |t: i32| ModeIndex::from_twice(t).to_string();
    let entries: Vec<Value> = cg_table(twice_j1, twice_j2)
        .iter()
        .map(|e| {
            json!({
                "m1": half(e.twice_m1),
                "m2": half(e.twice_m2),
                "J": half(e.twice_j),
                "M": half(e.twice_m),
                "value": SignedSurdJson::from(&e.value),
            })
        })
        .collect();
    json!({
        "j1": JLevel::new(twice_j1).to_string(),
        "j2": JLevel::new(twice_j2).to_string(),
        "entries": entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use quon_core::number::solve_series_coefficients;
    use quon_core::scalar::ratio;
    use quon_core::Deformation;

    #[test]
    fn gram_dump_formats() {
        let s = FockSpace::new(JLevel::new(1), 2, Deformation::new(ratio(1, 2)).unwrap());
        let csv = gram_csv(&s, 2);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# j=1/2, n=2, q=1/2, backend=exact");
        assert_eq!(
            lines[1],
            "word,\"(-1/2,-1/2)\",\"(-1/2,1/2)\",\"(1/2,-1/2)\",\"(1/2,1/2)\""
        );
        assert_eq!(lines[3], "\"(-1/2,1/2)\",0,1,1/2,0");
        let j = gram_json(&s, 2);
        assert_eq!(j["matrix"][0][0], "3/2");
        assert_eq!(j["backend"], "exact");
        let f = FockSpace::new(JLevel::new(1), 2, Deformation::new(0.5).unwrap());
        assert_eq!(gram_json(&f, 2)["matrix"][0][0], json!(1.5));
    }

    #[test]
    fn coefficient_table_keys() {
        let c = solve_series_coefficients(2, &Deformation::new(ratio(1, 2)).unwrap()).unwrap();
        let j = coefficients_json(&c);
        assert_eq!(j["coefficients"]["1"]["1"], "4/3");
        assert_eq!(j["coefficients"]["2"]["1 2"], "320/189");
        assert_eq!(j["coefficients"]["2"]["2 1"], "-128/189");
    }

    #[test]
    fn cg_values() {
        let j = cg_json(1, 1);
        let singlet: Vec<&Value> = j["entries"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|e| e["J"] == "0")
            .collect();
        assert_eq!(singlet.len(), 2);
        assert_eq!(singlet[0]["value"], json!({"sign": -1, "radicand": "1/2"}));
        assert_eq!(singlet[1]["value"], json!({"sign": 1, "radicand": "1/2"}));
    }
}
