//! The worked chart examples (projective plane, `C²/Z₂` orbifold, conifold
//! and their resolutions), with the relations as displayed and the status
//! of each displayed phase against the star product.

use serde_json::{json, Value};

use crate::fan::{Cone, LatticePoint};
use crate::intlin;
use crate::presentation::{AlgebraPresentation, Binomial, IdentityCheck};
use crate::scalars::PhaseExp;
use crate::torus::{ChartAlgebra, TorusError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Agrees,
    Erratum { corrected: PhaseExp },
}

/// A displayed commutation `g_a g_b = phase g_b g_a`.
#[derive(Debug, Clone)]
pub struct PhaseEntry {
    pub a: usize,
    pub b: usize,
    pub displayed: PhaseExp,
    pub status: Status,
}

/// A binomial `x^lhs = phase x^rhs`; `displayed` is `None` when the text
/// states only the lattice relation.
#[derive(Debug, Clone)]
pub struct BinomialEntry {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    pub displayed: Option<PhaseExp>,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct ExampleChart {
    pub id: &'static str,
    pub n: usize,
    /// Rays of the cone whose dual the displayed generators generate.
    pub rays: Vec<LatticePoint>,
    /// Rays as stated in the text, when they differ from `rays`.
    pub stated_rays: Option<Vec<LatticePoint>>,
    pub names: Vec<&'static str>,
    pub generators: Vec<LatticePoint>,
    /// Displayed generators replaced in `generators`, as `(index, displayed)`.
    pub generator_errata: Vec<(usize, LatticePoint)>,
    pub phases: Vec<PhaseEntry>,
    pub binomials: Vec<BinomialEntry>,
}

fn q(entries: &[(usize, usize, i32)]) -> PhaseExp {
    let mut e = PhaseExp::one();
    for &(i, j, k) in entries {
        e.add_q(i, j, k);
    }
    e
}

fn agrees(a: usize, b: usize, displayed: PhaseExp) -> PhaseEntry {
    PhaseEntry { a, b, displayed, status: Status::Agrees }
}

fn erratum(a: usize, b: usize, displayed: PhaseExp, corrected: PhaseExp) -> PhaseEntry {
    PhaseEntry { a, b, displayed, status: Status::Erratum { corrected } }
}

fn unit_binomial(l: usize, a: usize, b: usize) -> BinomialEntry {
    let mut lhs = vec![0; l];
    lhs[a] = 1;
    lhs[b] = 1;
    BinomialEntry { lhs, rhs: vec![0; l], displayed: Some(PhaseExp::one()), status: Status::Agrees }
}

impl PhaseEntry {
    pub fn expected(&self) -> &PhaseExp {
        match &self.status {
            Status::Agrees => &self.displayed,
            Status::Erratum { corrected } => corrected,
        }
    }
}

impl BinomialEntry {
    pub fn expected(&self) -> Option<&PhaseExp> {
        match &self.status {
            Status::Agrees => self.displayed.as_ref(),
            Status::Erratum { corrected } => Some(corrected),
        }
    }
}

fn status_json(s: &Status) -> Value {
    match s {
        Status::Agrees => json!({"status": "agrees"}),
        Status::Erratum { corrected } => json!({"status": "erratum", "corrected": corrected.to_string()}),
    }
}

impl ExampleChart {
    pub fn cone(&self) -> Result<Cone, TorusError> {
        Ok(Cone::new(self.n, self.rays.clone())?)
    }

    pub fn chart(&self) -> Result<ChartAlgebra, TorusError> {
        ChartAlgebra::with_generators(&self.cone()?, self.generators.clone(), 8)
    }

    pub fn names(&self) -> Vec<String> {
        self.names.iter().map(|s| s.to_string()).collect()
    }

    /// Chart presentation under the displayed names, with the binomials in
    /// displayed orientation.
    pub fn presentation(&self) -> Result<AlgebraPresentation, TorusError> {
        let chart = self.chart()?;
        let mut p = chart.presentation();
        p.generators = self.names();
        p.binomials = self
            .binomials
            .iter()
            .map(|b| Binomial { lhs: b.lhs.clone(), rhs: b.rhs.clone(), phase: chart.excon_phase(&b.lhs, &b.rhs) })
            .collect();
        Ok(p)
    }

    /// Every displayed phase against the chart: agreeing entries must equal
    /// the computed phase, errata must differ from it and match the
    /// correction. The binomials must span the relation lattice.
    pub fn checks(&self) -> Result<Vec<IdentityCheck>, TorusError> {
        let chart = self.chart()?;
        let names = self.names();
        let mut comm = Vec::new();
        for e in &self.phases {
            let got = chart.check_theta()[e.a][e.b].pow(2);
            let ok = match &e.status {
                Status::Agrees => got == e.displayed,
                Status::Erratum { corrected } => got == *corrected && got != e.displayed,
            };
            if !ok {
                comm.push(format!("{}{}: computed {}, displayed {}", names[e.a], names[e.b], got, e.displayed));
            }
        }
        let mut bin = Vec::new();
        for b in &self.binomials {
            let got = chart.excon_phase(&b.lhs, &b.rhs);
            let diff: Vec<i64> = b.lhs.iter().zip(&b.rhs).map(|(x, y)| x - y).collect();
            let lat = diff.iter().zip(chart.generators()).fold(vec![0; self.n], |mut acc, (k, m)| {
                for i in 0..self.n {
                    acc[i] += k * m[i];
                }
                acc
            });
            if lat.iter().any(|x| *x != 0) {
                bin.push(format!("{:?} - {:?} is not a lattice relation", b.lhs, b.rhs));
            }
            let ok = match (&b.status, &b.displayed) {
                (Status::Agrees, Some(d)) => got == *d,
                (Status::Agrees, None) => true,
                (Status::Erratum { corrected }, d) => got == *corrected && d.as_ref() != Some(&got),
            };
            if !ok {
                bin.push(format!("{:?} - {:?}: computed {}", b.lhs, b.rhs, got));
            }
        }
        let l = chart.len();
        let ours: Vec<Vec<i64>> =
            self.binomials.iter().map(|b| b.lhs.iter().zip(&b.rhs).map(|(x, y)| x - y).collect()).collect();
        let theirs: Vec<Vec<i64>> = chart
            .relation_lattice()
            .relations
            .iter()
            .map(|(p, r)| p.iter().zip(r).map(|(x, y)| x - y).collect())
            .collect();
        let nonzero = |m: Vec<Vec<i64>>| m.into_iter().filter(|r| r.iter().any(|x| *x != 0)).collect::<Vec<_>>();
        if nonzero(intlin::hnf(&ours, l)) != nonzero(intlin::hnf(&theirs, l)) {
            bin.push("binomials do not span the relation lattice".into());
        }
        let mut stated = Vec::new();
        if let Some(rays) = &self.stated_rays {
            let c = Cone::new(self.n, rays.clone())?;
            if crate::fan::generates_dual_semigroup(&c, &self.generators, 8)? {
                stated.push("displayed generators also generate the stated dual cone".into());
            }
        }
        let mut golden = Vec::new();
        match golden_text(self.id) {
            Some(g) if g == self.presentation()?.to_text() => {}
            Some(_) => golden.push("presentation text differs from the transcription".into()),
            None => golden.push("no transcription".into()),
        }
        Ok(vec![
            IdentityCheck::from_failures(&format!("{}/golden", self.id), golden),
            IdentityCheck::from_failures(&format!("{}/commutation", self.id), comm),
            IdentityCheck::from_failures(&format!("{}/binomials", self.id), bin),
            IdentityCheck::from_failures(&format!("{}/cone", self.id), stated),
        ])
    }

    pub fn transcription_json(&self) -> Value {
        let names = self.names();
        let comm: Vec<Value> = self
            .phases
            .iter()
            .map(|e| {
                let mut v = json!({"pair": [names[e.a], names[e.b]], "displayed": e.displayed.to_string()});
                for (k, x) in status_json(&e.status).as_object().unwrap() {
                    v[k] = x.clone();
                }
                v
            })
            .collect();
        let bin: Vec<Value> = self
            .binomials
            .iter()
            .map(|b| {
                let mut v =
                    json!({"lhs": b.lhs, "rhs": b.rhs, "displayed": b.displayed.as_ref().map(|p| p.to_string())});
                for (k, x) in status_json(&b.status).as_object().unwrap() {
                    v[k] = x.clone();
                }
                v
            })
            .collect();
        let mut v = json!({"id": self.id, "rays": self.rays, "generators": self.generators, "commutation": comm, "binomials": bin});
        if let Some(r) = &self.stated_rays {
            v["stated_rays"] = json!(r);
        }
        if !self.generator_errata.is_empty() {
            v["generator_errata"] = json!(self.generator_errata);
        }
        v
    }
}

pub fn worked_examples() -> Vec<ExampleChart> {
    let (e1, e2) = (vec![1, 0], vec![0, 1]);
    let v3 = vec![-1, -1];
    let q12 = |k| q(&[(1, 2, k)]);
    vec![
        ExampleChart {
            id: "cp2-sigma3",
            n: 2,
            rays: vec![e1.clone(), e2.clone()],
            stated_rays: None,
            names: vec!["x1", "x2"],
            generators: vec![vec![1, 0], vec![0, 1]],
            generator_errata: vec![],
            phases: vec![agrees(0, 1, q12(2))],
            binomials: vec![],
        },
        ExampleChart {
            id: "cp2-sigma2",
            n: 2,
            rays: vec![e2.clone(), v3.clone()],
            stated_rays: Some(vec![v3.clone(), e1.clone()]),
            names: vec!["x1", "x2"],
            generators: vec![vec![-1, 0], vec![-1, 1]],
            generator_errata: vec![],
            phases: vec![agrees(0, 1, q12(-2))],
            binomials: vec![],
        },
        ExampleChart {
            id: "cp2-sigma1",
            n: 2,
            rays: vec![e1.clone(), v3.clone()],
            stated_rays: Some(vec![e2.clone(), v3.clone()]),
            names: vec!["x1", "x2"],
            generators: vec![vec![1, -1], vec![0, -1]],
            generator_errata: vec![],
            phases: vec![erratum(0, 1, q12(2), q12(-2))],
            binomials: vec![],
        },
        ExampleChart {
            id: "cp2-tau1",
            n: 2,
            rays: vec![e1.clone()],
            stated_rays: None,
            names: vec!["y1", "y2", "y3"],
            generators: vec![vec![1, 0], vec![0, 1], vec![0, -1]],
            generator_errata: vec![],
            phases: vec![agrees(0, 1, q12(2)), agrees(0, 2, q12(-2)), agrees(1, 2, PhaseExp::one())],
            binomials: vec![unit_binomial(3, 1, 2)],
        },
        ExampleChart {
            id: "orbifold",
            n: 2,
            rays: vec![vec![1, 0], vec![1, 2]],
            stated_rays: None,
            names: vec!["x", "y", "z"],
            generators: vec![vec![2, -1], vec![0, 1], vec![1, 0]],
            generator_errata: vec![],
            phases: vec![agrees(0, 1, q12(4)), agrees(0, 2, q12(2)), agrees(1, 2, q12(-2))],
            binomials: vec![BinomialEntry {
                lhs: vec![1, 1, 0],
                rhs: vec![0, 0, 2],
                displayed: Some(q12(2)),
                status: Status::Agrees,
            }],
        },
        ExampleChart {
            id: "orbifold-resolution-plus",
            n: 2,
            rays: vec![vec![0, 1], vec![1, 1]],
            stated_rays: Some(vec![vec![1, 0], vec![1, 1]]),
            names: vec!["u+", "v+"],
            generators: vec![vec![1, 0], vec![-1, 1]],
            generator_errata: vec![],
            phases: vec![agrees(0, 1, q12(2))],
            binomials: vec![],
        },
        ExampleChart {
            id: "orbifold-resolution-minus",
            n: 2,
            rays: vec![vec![-1, 1], vec![0, 1]],
            stated_rays: Some(vec![vec![1, 1], vec![1, 2]]),
            names: vec!["u-", "v-"],
            generators: vec![vec![-1, 0], vec![1, 1]],
            generator_errata: vec![],
            phases: vec![agrees(0, 1, q12(-2))],
            binomials: vec![],
        },
        ExampleChart {
            id: "orbifold-resolution-tau",
            n: 2,
            rays: vec![vec![1, 1]],
            stated_rays: None,
            names: vec!["y1", "y2", "y3"],
            generators: vec![vec![1, 0], vec![-1, 1], vec![1, -1]],
            generator_errata: vec![],
            phases: vec![agrees(0, 1, q12(2)), agrees(0, 2, q12(-2)), agrees(1, 2, PhaseExp::one())],
            binomials: vec![unit_binomial(3, 1, 2)],
        },
        ExampleChart {
            id: "conifold",
            n: 3,
            rays: vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            stated_rays: None,
            names: vec!["x", "y", "z", "w"],
            generators: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1]],
            generator_errata: vec![],
            phases: vec![
                agrees(0, 1, q(&[(1, 2, 2)])),
                agrees(0, 2, q(&[(1, 3, 2)])),
                agrees(0, 3, q(&[(1, 2, 2), (1, 3, -2)])),
                agrees(1, 2, q(&[(2, 3, 2)])),
                agrees(1, 3, q(&[(1, 2, -2), (2, 3, -2)])),
                erratum(2, 3, q(&[(1, 3, 2), (2, 3, 2)]), q(&[(1, 3, -2), (2, 3, -2)])),
            ],
            binomials: vec![BinomialEntry {
                lhs: vec![1, 1, 0, 0],
                rhs: vec![0, 0, 1, 1],
                displayed: Some(q(&[(1, 2, 2), (1, 3, -2), (2, 3, -2)])),
                status: Status::Erratum { corrected: q(&[(1, 2, 1), (1, 3, 1), (2, 3, 1)]) },
            }],
        },
        ExampleChart {
            id: "conifold-resolution-sigma1",
            n: 3,
            rays: vec![vec![1, 1, 1], vec![1, 0, 1], vec![1, 0, 0]],
            stated_rays: None,
            names: vec!["x", "y", "z"],
            generators: vec![vec![0, 1, 0], vec![0, -1, 1], vec![1, 0, -1]],
            generator_errata: vec![],
            phases: vec![
                agrees(0, 1, q(&[(2, 3, 2)])),
                agrees(0, 2, q(&[(1, 2, -2), (2, 3, -2)])),
                erratum(1, 2, q(&[(1, 2, -2)]), q(&[(1, 2, 2), (1, 3, -2), (2, 3, 2)])),
            ],
            binomials: vec![],
        },
        ExampleChart {
            id: "conifold-resolution-sigma2",
            n: 3,
            rays: vec![vec![1, 1, 1], vec![1, 0, 0], vec![1, 1, 0]],
            stated_rays: None,
            names: vec!["x", "y", "z"],
            generators: vec![vec![0, 0, 1], vec![1, -1, 0], vec![0, 1, -1]],
            generator_errata: vec![],
            phases: vec![
                agrees(0, 1, q(&[(1, 3, -2), (2, 3, 2)])),
                agrees(0, 2, q(&[(2, 3, -2)])),
                agrees(1, 2, q(&[(1, 2, 2), (1, 3, -2), (2, 3, 2)])),
            ],
            binomials: vec![],
        },
        ExampleChart {
            id: "conifold-resolution-tau",
            n: 3,
            rays: vec![vec![1, 1, 1], vec![1, 0, 0]],
            stated_rays: None,
            names: vec!["y1", "y2", "y3", "y4"],
            generators: vec![vec![0, 1, 0], vec![1, -1, 0], vec![0, 1, -1], vec![0, -1, 1]],
            generator_errata: vec![(2, vec![0, 1, 1]), (3, vec![0, -1, -1])],
            phases: vec![
                agrees(0, 1, q(&[(1, 2, -2)])),
                erratum(0, 2, q(&[(2, 3, 2)]), q(&[(2, 3, -2)])),
                erratum(0, 3, q(&[(2, 3, -2)]), q(&[(2, 3, 2)])),
                erratum(1, 2, q(&[(1, 2, 2), (1, 3, 2), (2, 3, -2)]), q(&[(1, 2, 2), (1, 3, -2), (2, 3, 2)])),
                erratum(1, 3, q(&[(1, 2, -2), (1, 3, -2), (2, 3, 2)]), q(&[(1, 2, -2), (1, 3, 2), (2, 3, -2)])),
                erratum(2, 3, q(&[(2, 3, 2)]), PhaseExp::one()),
            ],
            binomials: vec![unit_binomial(4, 2, 3)],
        },
    ]
}

pub fn worked_example(id: &str) -> Option<ExampleChart> {
    worked_examples().into_iter().find(|e| e.id == id)
}

/// Hand-transcribed presentation text for each worked example.
pub fn golden_text(id: &str) -> Option<&'static str> {
    Some(match id {
        "cp2-sigma3" => include_str!("../tests/golden/cp2-sigma3.txt"),
        "cp2-sigma2" => include_str!("../tests/golden/cp2-sigma2.txt"),
        "cp2-sigma1" => include_str!("../tests/golden/cp2-sigma1.txt"),
        "cp2-tau1" => include_str!("../tests/golden/cp2-tau1.txt"),
        "orbifold" => include_str!("../tests/golden/orbifold.txt"),
        "orbifold-resolution-plus" => include_str!("../tests/golden/orbifold-resolution-plus.txt"),
        "orbifold-resolution-minus" => include_str!("../tests/golden/orbifold-resolution-minus.txt"),
        "orbifold-resolution-tau" => include_str!("../tests/golden/orbifold-resolution-tau.txt"),
        "conifold" => include_str!("../tests/golden/conifold.txt"),
        "conifold-resolution-sigma1" => include_str!("../tests/golden/conifold-resolution-sigma1.txt"),
        "conifold-resolution-sigma2" => include_str!("../tests/golden/conifold-resolution-sigma2.txt"),
        "conifold-resolution-tau" => include_str!("../tests/golden/conifold-resolution-tau.txt"),
        _ => return None,
    })
}
