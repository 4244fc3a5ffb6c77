//! Named verification suites. Each suite expands to a list of independent
//! tasks so that evaluation can be spread over threads without changing
//! the output order.

use std::time::Instant;

use hodge_core::arith::factorial_rat;
use hodge_core::closed::{
    b_closed, bernoulli_identity_checks, c_closed_series, ihop_check, lambda3_closed, lamg_closed,
    lamgg_closed, C_closed,
};
use hodge_core::hodge::{HodgeEngine, LambdaPoly};
use hodge_core::intersect::dimension;
use hodge_core::localize::{
    chern_over_psi, compositions, g_series, partition_relation, C_localized, I_g, J_g,
    Linearization,
};
use hodge_core::series::{sinc_half, sinc_half_inverse};
use hodge_core::{Rat, Result};

use crate::report::{Check, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Theorem2,
    Theorem3,
    Theorem4,
    Lamg,
    Lamgg,
    Ihop,
    Localization,
    PartitionRelation,
    Zeroz,
    Lemmas,
    Bg,
    Wk,
    Prop3,
    Mumford,
    All,
}

impl Suite {
    pub const EVERY: [Suite; 14] = [
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::Theorem4,
        Suite::Lamg,
        Suite::Lamgg,
        Suite::Ihop,
        Suite::Localization,
        Suite::PartitionRelation,
        Suite::Zeroz,
        Suite::Lemmas,
        Suite::Bg,
        Suite::Wk,
        Suite::Prop3,
        Suite::Mumford,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem4 => "theorem4",
            Suite::Lamg => "lamg",
            Suite::Lamgg => "lamgg",
            Suite::Ihop => "ihop",
            Suite::Localization => "localization",
            Suite::PartitionRelation => "partition-relation",
            Suite::Zeroz => "zeroz",
            Suite::Lemmas => "lemmas",
            Suite::Bg => "bg",
            Suite::Wk => "wk",
            Suite::Prop3 => "prop3",
            Suite::Mumford => "mumford",
            Suite::All => "all",
        }
    }

    /// Default genus bound when `--max-genus` is absent.
    fn default_genus(self) -> u32 {
        match self {
            Suite::Theorem2 | Suite::Theorem3 | Suite::Prop3 | Suite::Mumford => 4,
            Suite::Bg | Suite::Zeroz => 5,
            Suite::Wk => 6,
            Suite::Ihop => 8,
            Suite::Lemmas => 10,
            _ => 3,
        }
    }

    fn default_degree(self) -> u32 {
        match self {
            Suite::Theorem3 => 5,
            _ => 4,
        }
    }
}

/// User-supplied bounds; `None` falls back to each suite's default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bounds {
    pub max_genus: Option<u32>,
    pub max_degree: Option<u32>,
    pub order: Option<usize>,
}

type Eval = Box<dyn Fn(&HodgeEngine) -> Result<(Rat, Rat)> + Send + Sync>;

pub struct Task {
    pub id: String,
    eval: Eval,
}

impl Task {
    fn new(
        id: impl Into<String>,
        eval: impl Fn(&HodgeEngine) -> Result<(Rat, Rat)> + Send + Sync + 'static,
    ) -> Self {
        Task {
            id: id.into(),
            eval: Box::new(eval),
        }
    }

    pub fn run(&self, e: &HodgeEngine) -> Result<Check> {
        let (lhs, rhs) = (self.eval)(e)?;
        Ok(Check::new(self.id.clone(), lhs, rhs))
    }
}

fn grid() -> impl Iterator<Item = (i64, i64)> {
    (-2..=2).flat_map(|a| (-2..=2).map(move |b| (a, b)))
}

/// Expands a suite into tasks. `All` is not a single suite; see [`expand`].
pub fn tasks(suite: Suite, bounds: Bounds) -> Vec<Task> {
    let big_g = bounds
        .max_genus
        .unwrap_or_else(|| match (suite, bounds.order) {
            (Suite::Theorem2 | Suite::Prop3, Some(n)) => (n / 2) as u32,
            _ => suite.default_genus(),
        });
    let big_d = bounds.max_degree.unwrap_or_else(|| suite.default_degree());
    let mut out = Vec::new();
    match suite {
        Suite::All => {}
        Suite::Theorem2 => {
            for g in 1..=big_g {
                for i in 0..=g {
                    out.push(Task::new(format!("t^{}k^{i}", 2 * g), move |e| {
                        let closed = sinc_half_inverse(2 * big_g as usize)?.pow_kplus1()?;
                        Ok((
                            e.f_coefficient(g, i)?,
                            closed.coeff(2 * g as usize).coeff(i as usize),
                        ))
                    }));
                }
            }
        }
        Suite::Bg => {
            for g in 1..=big_g {
                out.push(Task::new(format!("b{g}"), move |e| {
                    Ok((e.hodge(g, &[2 * g - 2], &[g])?, b_closed(g)?))
                }));
            }
        }
        Suite::Wk => {
            for g in 1..=big_g {
                out.push(Task::new(format!("tau{}/g={g}", 3 * g - 2), move |e| {
                    let want = (Rat::int(24).pow(g as i32) * factorial_rat(g as u64)).recip();
                    Ok((e.intersector().psi(g, &[3 * g - 2])?, want))
                }));
            }
        }
        Suite::Theorem4 => {
            for g in 2..=big_g {
                out.push(Task::new(format!("g={g}"), move |e| {
                    Ok((e.hodge(g, &[], &[g - 1, g - 1, g - 1])?, lambda3_closed(g)?))
                }));
            }
        }
        Suite::Theorem3 => {
            for g in 0..=big_g {
                for d in 1..=big_d as i64 {
                    out.push(Task::new(format!("g={g},d={d}"), move |e| {
                        Ok((C_localized(e, g, d)?, C_closed(g, d)?))
                    }));
                }
            }
        }
        Suite::Ihop => {
            for g in 1..=big_g {
                out.push(Task::new(format!("g={g}"), move |_| ihop_check(g)));
            }
            for g in 1..=big_g.min(3) {
                out.push(Task::new(format!("c{g}/engine"), move |e| {
                    let c = c_closed_series(2 * g as usize)?;
                    Ok((
                        e.hodge(g, &[2 * g - 1], &[g - 1])?,
                        c.coeff(2 * g as usize).clone(),
                    ))
                }));
            }
        }
        Suite::Lemmas => {
            for g in 1..=big_g {
                for j in 0..4 {
                    let name = bernoulli_identity_checks(g)
                        .map(|v| v[j].name.clone())
                        .unwrap_or_else(|_| format!("identity{j}/g={g}"));
                    out.push(Task::new(name, move |_| {
                        let c = bernoulli_identity_checks(g)?.swap_remove(j);
                        Ok((c.lhs, c.rhs))
                    }));
                }
            }
        }
        Suite::Prop3 => {
            for xi in -2i64..=2 {
                for g in 1..=big_g {
                    out.push(Task::new(format!("xi={xi}/t^{}", 2 * g), move |e| {
                        let f = e.capped_lambda_series(xi, big_g)?;
                        let f0 = e.capped_lambda_series(0, big_g)?;
                        let k = 2 * g as usize;
                        Ok((f.coeff(k).clone(), f0.powi(xi + 1)?.coeff(k).clone()))
                    }));
                }
            }
            for g in 1..=big_g {
                out.push(Task::new(format!("xi=-2/sin/t^{}", 2 * g), move |e| {
                    let k = 2 * g as usize;
                    let f = e.capped_lambda_series(-2, big_g)?;
                    Ok((
                        f.coeff(k).clone(),
                        sinc_half(2 * big_g as usize).coeff(k).clone(),
                    ))
                }));
            }
        }
        Suite::Zeroz => {
            for g in 1..=big_g {
                out.push(Task::new(format!("g={g}"), move |e| {
                    Ok((chern_over_psi(e, g, 3 * g - 2)?, Rat::zero()))
                }));
            }
            for g in 1..=big_g.min(4) {
                for j in 2 * g - 1..3 * g - 2 {
                    out.push(Task::new(format!("g={g},j={j}"), move |e| {
                        Ok((chern_over_psi(e, g, j)?, Rat::zero()))
                    }));
                }
            }
        }
        Suite::Mumford => {
            for g in 1..=big_g {
                for n in 1..=2usize {
                    let dim = dimension(g, n) as u32;
                    for d in 1..=dim.min(2 * g) {
                        for ks in compositions(n, dim - d) {
                            out.push(Task::new(format!("g={g},d={d},psi={ks:?}"), move |e| {
                                let product = LambdaPoly::capital_lambda(g, &Rat::int(-1))
                                    .mul(&LambdaPoly::capital_lambda(g, &Rat::one()), dim);
                                let mut v = Rat::zero();
                                for (l, c) in product.terms() {
                                    if l.iter().sum::<u32>() == d {
                                        v += c * e.hodge(g, &ks, l)?;
                                    }
                                }
                                Ok((v, Rat::zero()))
                            }));
                        }
                    }
                }
            }
        }
        Suite::Localization => {
            for g in 1..=big_g {
                for (a, b) in grid() {
                    out.push(Task::new(format!("I/g={g}/a={a},b={b}"), move |e| {
                        Ok((
                            I_g(e, g, Linearization::new(a, b))?,
                            I_g(e, g, Linearization::new(0, 0))?,
                        ))
                    }));
                }
                for (a, b) in grid() {
                    out.push(Task::new(format!("J/g={g}/a={a},b={b}"), move |e| {
                        Ok((
                            J_g(e, g, Linearization::new(a, b))?,
                            J_g(e, g, Linearization::new(0, -1))?,
                        ))
                    }));
                }
            }
            for g in 1..=big_g {
                let k = 2 * g as usize;
                out.push(Task::new(format!("I(0,0)=f0(it)/t^{k}"), move |e| {
                    let f0 = sinc_half_inverse(k)?.substitute_it()?;
                    Ok((I_g(e, g, Linearization::new(0, 0))?, f0.coeff(k).clone()))
                }));
                out.push(Task::new(format!("J(0,-1)=f0^2(it)/t^{k}"), move |e| {
                    let f0 = sinc_half_inverse(k)?.substitute_it()?;
                    Ok((
                        J_g(e, g, Linearization::new(0, -1))?,
                        f0.mul(&f0)?.coeff(k).clone(),
                    ))
                }));
            }
            for xi in 0..=1i64 {
                for g in 1..=big_g.min(2) {
                    let k = 2 * g as usize;
                    out.push(Task::new(format!("J(0,{xi})=g*f/t^{k}"), move |e| {
                        let f = e.capped_lambda_series(xi + 1, g)?.substitute_it()?;
                        let prod = g_series(e, xi, g)?.mul(&f)?;
                        Ok((J_g(e, g, Linearization::new(0, xi))?, prod.coeff(k).clone()))
                    }));
                }
            }
        }
        Suite::PartitionRelation => {
            for g in 1..=big_g {
                for d in 2..=big_d {
                    out.push(Task::new(format!("g={g},d={d}"), move |e| {
                        Ok((partition_relation(e, g, d)?, Rat::zero()))
                    }));
                }
            }
        }
        Suite::Lamg => {
            for g in 1..=big_g {
                for n in 1..=3usize {
                    for ks in compositions(n, 2 * g + n as u32 - 3) {
                        out.push(Task::new(format!("g={g},psi={ks:?}"), move |e| {
                            Ok((e.hodge(g, &ks, &[g])?, lamg_closed(g, &ks)?))
                        }));
                    }
                }
            }
        }
        Suite::Lamgg => {
            for g in 2..=big_g {
                for k1 in 1..g {
                    let ks = [k1, g - k1];
                    out.push(Task::new(format!("g={g},psi={ks:?}"), move |e| {
                        let base = e.hodge(g, &[g - 1], &[g, g - 1])?;
                        Ok((e.hodge(g, &ks, &[g, g - 1])?, lamgg_closed(g, &ks, &base)?))
                    }));
                }
            }
        }
    }
    out
}

/// The concrete suites named by `suite`, with `All` expanded in a fixed order.
pub fn expand(suite: Suite) -> Vec<Suite> {
    match suite {
        Suite::All => Suite::EVERY.to_vec(),
        s => vec![s],
    }
}

/// Runs tasks in order, on `threads` workers when the `parallel` feature is on.
pub fn evaluate(tasks: &[Task], e: &HodgeEngine, threads: usize) -> Result<Vec<Check>> {
    #[cfg(feature = "parallel")]
    if threads > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .stack_size(crate::STACK_BYTES)
            .build()
            .expect("thread pool");
        return pool.install(|| tasks.par_iter().map(|t| t.run(e)).collect());
    }
    let _ = threads;
    tasks.iter().map(|t| t.run(e)).collect()
}

pub fn run_suite(
    suite: Suite,
    bounds: Bounds,
    e: &HodgeEngine,
    threads: usize,
    timing: bool,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = evaluate(&tasks(suite, bounds), e, threads)?;
    let mut report = SuiteReport {
        suite: suite.name().to_string(),
        checks,
        elapsed_ms: None,
    };
    report.set_elapsed(timing.then(|| start.elapsed()));
    Ok(report)
}
