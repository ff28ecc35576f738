//! Algebra presentations shared by charts, projective, grassmannian and
//! coinvariant algebras, with canonical JSON and text output.

use serde_json::{json, Value};

use crate::scalars::PhaseExp;

/// `gen[a] * gen[b] = phase * gen[b] * gen[a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commutation {
    pub a: usize,
    pub b: usize,
    pub phase: PhaseExp,
}

/// `x^lhs = phase * x^rhs`, both sides normal-ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binomial {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    pub phase: PhaseExp,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraPresentation {
    pub kind: String,
    pub generators: Vec<String>,
    /// Torus weight of each generator, when the algebra is graded by L*.
    pub weights: Vec<Vec<i64>>,
    pub commutation: Vec<Commutation>,
    pub binomials: Vec<Binomial>,
    /// Further relations (Plücker, Young, anticommutation) in text form.
    pub relations: Vec<String>,
}

pub fn monomial_text(names: &[String], exps: &[i64]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn scaled(phase: &PhaseExp, mono: &str) -> String {
    match (phase.is_one(), mono == "1") {
        (true, _) => mono.to_string(),
        (false, true) => phase.to_string(),
        (false, false) => format!("{}*{}", phase, mono),
    }
}

impl Binomial {
    pub fn text(&self, names: &[String]) -> String {
        format!("{} - {}", monomial_text(names, &self.lhs), scaled(&self.phase, &monomial_text(names, &self.rhs)))
    }
}

impl AlgebraPresentation {
    pub fn commutation_text(&self, c: &Commutation) -> String {
        let ga = &self.generators[c.a];
        let gb = &self.generators[c.b];
        format!("{}*{} = {}", ga, gb, scaled(&c.phase, &format!("{}*{}", gb, ga)))
    }

    pub fn to_json(&self) -> Value {
        let comm: Vec<Value> = self
            .commutation
            .iter()
            .map(|c| json!([self.generators[c.a], self.generators[c.b], c.phase.to_string()]))
            .collect();
        let bin: Vec<Value> = self
            .binomials
            .iter()
            .map(|b| {
                json!({
                    "lhs": b.lhs,
                    "rhs": b.rhs,
                    "phase": b.phase.to_string(),
                    "text": b.text(&self.generators),
                })
            })
            .collect();
        let mut v = json!({
            "kind": self.kind,
            "generators": self.generators,
            "commutation": comm,
            "binomials": bin,
        });
        if !self.weights.is_empty() {
            v["weights"] = json!(self.weights);
        }
        if !self.relations.is_empty() {
            v["relations"] = json!(self.relations);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} on {}\n", self.kind, self.generators.join(", "));
        for c in &self.commutation {
            s.push_str(&format!("  {}\n", self.commutation_text(c)));
        }
        for b in &self.binomials {
            s.push_str(&format!("  {} = 0\n", b.text(&self.generators)));
        }
        for r in &self.relations {
            s.push_str(&format!("  {}\n", r));
        }
        s
    }
}

/// One checked identity; on failure `witness` names the first offending case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl IdentityCheck {
    pub fn from_failures(name: &str, failures: Vec<String>) -> Self {
        IdentityCheck { name: name.into(), passed: failures.is_empty(), witness: failures.into_iter().next() }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"id": self.name, "status": if self.passed { "pass" } else { "fail" }});
        if let Some(w) = &self.witness {
            v["witness"] = json!(w);
        }
        v
    }
}

/// Names `prefix1, prefix2, …`.
pub fn numbered(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{}{}", prefix, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        let names = numbered("x", 3);
        let b = Binomial { lhs: vec![1, 1, 0], rhs: vec![0, 0, 2], phase: PhaseExp::q(1, 2) };
        assert_eq!(b.text(&names), "x1*x2 - q12*x3^2");
        let p = AlgebraPresentation {
            kind: "chart".into(),
            generators: names,
            commutation: vec![Commutation { a: 0, b: 1, phase: PhaseExp::q_pow(1, 2, 4) }],
            ..Default::default()
        };
        assert_eq!(p.commutation_text(&p.commutation[0]), "x1*x2 = q12^4*x2*x1");
        assert_eq!(p.to_json()["commutation"][0][2], "q12^4");
    }
}
