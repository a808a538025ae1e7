//! The individual named checks that make up the verification suite.
//!
//! Check names are stable and deterministic; each check draws its samples
//! from its own seeded stream (see [`super::sample`]). Numeric checks
//! compare points with the scaled distance from [`crate::num`] against
//! the configured tolerance; structural checks compare integers exactly.
//!
//! The structural checks validate inventory and wiring (counts, ids,
//! chart shapes, which map family each gluing belongs to). The *values*
//! of gluing coefficients, chart weights, and the deck rotation are
//! deliberately left to the sampled checks: they are exactly the data the
//! mutation tests perturb, and the point of the suite is that the
//! numerical identities themselves reject wrong integers.

use crate::atlas5::SlotPattern;
use crate::chart::{act, quotient_point, za_orbit_distance, ChartPoint, SlotKind};
use crate::error::Error;
use crate::hj::hj_evaluate;
use crate::map::{MapTag, TransitionMap};
use crate::num::{cpowi, from_f64, scaled_distance, unit, Scalar};
use num_complex::Complex;

use super::report::{clean, CheckRecord, Witness};
use super::sample::{check_rng, power_safe_range, sample_shape, unit_complex};
use super::{CheckConfig, SuiteData};
use crate::atlas5::Reduction;

use SlotKind::{ComplexPlane as P, PuncturedPlane as Q, UnitCircle as S, UnitDisk as D};

fn point_pairs<T: Scalar>(p: &ChartPoint<T>) -> Vec<[f64; 2]> {
    p.coords
        .iter()
        .map(|z| {
            [
                z.re.to_f64().unwrap_or(f64::MAX),
                z.im.to_f64().unwrap_or(f64::MAX),
            ]
        })
        .collect()
}

fn fmt_c<T: Scalar>(z: Complex<T>) -> String {
    format!(
        "({:.9e}, {:.9e})",
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN)
    )
}

fn fmt_coords<T: Scalar>(coords: &[Complex<T>]) -> String {
    let parts: Vec<String> = coords.iter().map(|&z| fmt_c(z)).collect();
    format!("[{}]", parts.join(", "))
}

/// Error accumulator shared by the sampled checks.
struct Acc {
    name: String,
    tol: f64,
    samples: u64,
    max_error: f64,
    witness: Option<Witness>,
    note: Option<String>,
    broken: bool,
}

impl Acc {
    fn new(name: impl Into<String>, tol: f64) -> Self {
        Acc {
            name: name.into(),
            tol,
            samples: 0,
            max_error: 0.0,
            witness: None,
            note: None,
            broken: false,
        }
    }

    fn record<T: Scalar, F: FnOnce() -> String>(
        &mut self,
        err: T,
        input: &ChartPoint<T>,
        detail: F,
    ) {
        self.samples += 1;
        let e = clean(err.to_f64().unwrap_or(f64::MAX));
        if e > self.max_error {
            self.max_error = e;
            if e > self.tol {
                self.witness = Some(Witness::new(&input.chart, &point_pairs(input), detail()));
            }
        }
    }

    fn eval_failed<T: Scalar>(&mut self, err: &Error, input: &ChartPoint<T>) {
        self.broken = true;
        self.samples += 1;
        self.note = Some(format!("evaluation failed: {err}"));
        self.witness = Some(Witness::new(
            &input.chart,
            &point_pairs(input),
            err.to_string(),
        ));
    }

    fn structural_failure(&mut self, why: String) {
        self.broken = true;
        self.note = Some(why);
    }

    fn finish(self) -> CheckRecord {
        let passed = !self.broken && self.max_error <= self.tol;
        CheckRecord {
            name: self.name,
            passed,
            samples: self.samples,
            max_error: self.max_error,
            tolerance: self.tol,
            note: self.note,
            witness: self.witness,
        }
    }
}

/// Collects integer/structural mismatches into one exact check record.
struct Problems {
    name: &'static str,
    items: Vec<String>,
}

impl Problems {
    fn new(name: &'static str) -> Self {
        Problems {
            name,
            items: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, why: impl FnOnce() -> String) {
        if !ok {
            self.items.push(why());
        }
    }

    fn finish(self) -> CheckRecord {
        let passed = self.items.is_empty();
        CheckRecord::exact(
            self.name,
            passed,
            if passed {
                None
            } else {
                Some(self.items.join("; "))
            },
        )
    }
}

/// Continued-fraction data is internally consistent and round-trips
/// exactly through evaluation.
pub(crate) fn hj_roundtrip(suite: &SuiteData) -> CheckRecord {
    let mut p = Problems::new("hj/roundtrip");
    let exp = &suite.expansion;
    let (r, a) = (suite.fiber.r(), suite.fiber.a());
    let n = exp.coefficients.len();
    p.expect(exp.remainders.len() == n + 2, || {
        format!(
            "remainder count {} != coefficient count {} + 2",
            exp.remainders.len(),
            n
        )
    });
    p.expect(exp.remainders.first() == Some(&r), || {
        "remainders must start at the fiber order".to_string()
    });
    p.expect(exp.remainders.get(1) == Some(&a), || {
        "second remainder must equal the weight".to_string()
    });
    p.expect(exp.remainders.ends_with(&[1, 0]), || {
        "remainders must terminate in 1, 0".to_string()
    });
    p.expect(exp.remainders.windows(2).all(|w| w[0] > w[1]), || {
        "remainders must be strictly decreasing".to_string()
    });
    p.expect(exp.coefficients.iter().all(|&b| b >= 2), || {
        "all coefficients must be at least 2".to_string()
    });
    for i in 1..=n {
        p.expect(
            exp.coefficients[i - 1] * exp.remainders[i] - exp.remainders[i + 1]
                == exp.remainders[i - 1],
            || format!("remainder recurrence fails at position {i}"),
        );
    }
    match hj_evaluate(&exp.coefficients) {
        Ok(pair) => p.expect(pair == (r, a), || {
            format!(
                "evaluation returned {}/{} instead of {r}/{a}",
                pair.0, pair.1
            )
        }),
        Err(e) => p.expect(false, || format!("evaluation failed: {e}")),
    }
    p.finish()
}

/// One reduction step at a time walks exactly the remainder sequence and
/// consumes exactly the expansion coefficients.
pub(crate) fn reduction_sequence(suite: &SuiteData) -> CheckRecord {
    let mut p = Problems::new("reduction/sequence");
    let exp = &suite.expansion;
    let n = exp.coefficients.len();
    let mut fiber = suite.fiber;
    let mut steps = 0usize;
    loop {
        if steps > n {
            p.expect(false, || {
                format!("reduction did not terminate after {n} steps")
            });
            break;
        }
        match crate::atlas5::reduce_once(fiber) {
            Ok(Reduction::Step {
                next,
                b1,
                normalize,
                ..
            }) => {
                p.expect(b1 == exp.coefficients[steps], || {
                    format!(
                        "step {steps} consumed coefficient {b1}, expected {}",
                        exp.coefficients[steps]
                    )
                });
                p.expect(
                    (next.r(), next.a()) == (exp.remainders[steps + 1], exp.remainders[steps + 2]),
                    || {
                        format!(
                            "step {steps} reduced to 1/{} (1, {}), expected 1/{} (1, {})",
                            next.r(),
                            next.a(),
                            exp.remainders[steps + 1],
                            exp.remainders[steps + 2]
                        )
                    },
                );
                p.expect(normalize.tag == MapTag::NormalizeB { b: b1 }, || {
                    format!("step {steps} carries the wrong renormalization")
                });
                fiber = next;
                steps += 1;
            }
            Ok(Reduction::Free) => {
                p.expect(steps == n - 1, || {
                    format!(
                        "reduction became free after {steps} steps, expected {}",
                        n - 1
                    )
                });
                break;
            }
            Err(e) => {
                p.expect(false, || format!("reduction failed at step {steps}: {e}"));
                break;
            }
        }
    }
    p.finish()
}

/// Atlas inventory and wiring: chart counts and ids, slot shapes, map
/// families, exceptional-chain adjacency and topology types, and the
/// presence conditions of the optional structures.
pub(crate) fn atlas_counts(suite: &SuiteData) -> CheckRecord {
    let mut p = Problems::new("atlas/counts");
    let n = suite.expansion.coefficients.len();
    let a5 = &suite.atlas5;
    let a4 = &suite.atlas4;

    p.expect(a5.charts.len() == n + 1, || {
        format!(
            "5-d atlas has {} charts, expected {}",
            a5.charts.len(),
            n + 1
        )
    });
    for (i, c) in a5.charts.iter().take(n).enumerate() {
        p.expect(c.id == format!("X{i}") && c.slots == vec![P, S, P], || {
            format!("chart {} is not the expected chain chart", c.id)
        });
    }
    if let Some(c) = a5.charts.last() {
        p.expect(
            c.id == format!("Xp{}", n - 1) && c.slots == vec![P, P, S],
            || "primed final chart has the wrong id or shape".to_string(),
        );
    }
    p.expect(
        a5.model.id == "US" && a5.model.slots == vec![S, P, P],
        || "5-d model chart has the wrong id or shape".to_string(),
    );
    p.expect(a5.transitions.len() == n, || {
        format!(
            "5-d atlas has {} transitions, expected {n}",
            a5.transitions.len()
        )
    });
    for (k, t) in a5.transitions.iter().take(n - 1).enumerate() {
        let wired = matches!(t.tag, MapTag::ChainG { index, .. } if index == k + 1)
            && t.src == format!("X{k}")
            && t.dst == format!("X{}", k + 1);
        p.expect(wired, || format!("chain transition {k} is miswired"));
    }
    if let Some(t) = a5.transitions.last() {
        p.expect(
            t.tag == MapTag::GlueF
                && t.src == format!("Xp{}", n - 1)
                && t.dst == format!("X{}", n - 1),
            || "final gluing is miswired".to_string(),
        );
    }
    p.expect(
        a5.embedding.tag == MapTag::EmbedE1 && a5.embedding.src == "US" && a5.embedding.dst == "X0",
        || "model embedding is miswired".to_string(),
    );

    let chain = &a5.exceptional;
    p.expect(chain.components.len() == n, || {
        format!(
            "exceptional chain has {} components, expected {n}",
            chain.components.len()
        )
    });
    p.expect(chain.circles.len() == n - 1, || {
        format!(
            "exceptional chain has {} circles, expected {}",
            chain.circles.len(),
            n - 1
        )
    });
    for (j, comp) in chain.components.iter().enumerate() {
        let want_s3 = j + 1 == n;
        p.expect(
            (comp.topology == crate::atlas5::Topology::ThreeSphere) == want_s3,
            || format!("component {} has the wrong topology type", j + 1),
        );
        p.expect(comp.index == j + 1 && comp.views.len() == 2, || {
            format!("component {} is misindexed or has wrong view count", j + 1)
        });
    }
    for j in 1..n {
        let left = &chain.components[j - 1];
        let right = &chain.components[j];
        let shared = left
            .views
            .iter()
            .any(|v| right.views.iter().any(|w| w.chart == v.chart));
        p.expect(shared, || {
            format!("components {j} and {} are not chart-adjacent", j + 1)
        });
        let circle = &chain.circles[j - 1];
        p.expect(
            circle.chart == format!("X{j}")
                && circle.pattern
                    == vec![SlotPattern::Zero, SlotPattern::Circle, SlotPattern::Zero],
            || format!("intersection circle {j} is misplaced"),
        );
    }

    p.expect(a4.charts.len() == n + 1, || {
        format!(
            "4-d atlas has {} charts, expected {}",
            a4.charts.len(),
            n + 1
        )
    });
    p.expect(a4.transitions.len() == n, || {
        format!(
            "4-d atlas has {} gluings, expected {n}",
            a4.transitions.len()
        )
    });
    for (i, t) in a4.transitions.iter().enumerate() {
        let wired = matches!(t.tag, MapTag::ReidF { .. })
            && t.src == format!("Y{i}")
            && t.dst == format!("Y{}", i + 1);
        p.expect(wired, || format!("4-d gluing {i} is miswired"));
    }
    p.expect(a4.embeddings.len() == 2, || {
        "4-d atlas must embed the base into the first two charts".to_string()
    });
    p.expect(a4.curves.len() == n, || {
        format!("curve list has {} entries, expected {n}", a4.curves.len())
    });
    p.expect(
        a4.curves.iter().enumerate().all(|(i, c)| c.index == i + 1),
        || "curve indices must be 1-based and consecutive".to_string(),
    );
    p.expect(a4.two_chart.is_some() == (suite.fiber.a() >= 2), || {
        "two-chart reduction presence must match a >= 2".to_string()
    });
    p.finish()
}

fn equivariance_one<T: Scalar>(
    suite: &SuiteData,
    cfg: &CheckConfig,
    m: &TransitionMap,
) -> CheckRecord {
    let name = format!("equivariance/{}:{}->{}", m.tag, m.src, m.dst);
    let mut acc = Acc::new(&name, cfg.tol);
    let src_w = match suite.chart_weights(&m.src) {
        Ok(w) => w,
        Err(e) => {
            acc.structural_failure(e.to_string());
            return acc.finish();
        }
    };
    let dst_w = match suite.chart_weights(&m.dst) {
        Ok(w) => w,
        Err(e) => {
            acc.structural_failure(e.to_string());
            return acc.finish();
        }
    };
    let mut rng = check_rng(cfg.seed, &name);
    'points: for _ in 0..cfg.samples_per_check {
        let x: ChartPoint<T> =
            sample_shape(&mut rng, &m.src, m.tag.src_shape(), None, cfg.radius_range);
        let y = match m.eval(&x) {
            Ok(y) => y,
            Err(e) => {
                acc.eval_failed(&e, &x);
                break 'points;
            }
        };
        for _ in 0..cfg.group_samples {
            let t: Complex<T> = unit_complex(&mut rng);
            let lhs = match act(src_w, t, &x).and_then(|moved| m.eval(&moved)) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            let rhs = match act(dst_w, t, &y) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            let err = scaled_distance(&lhs.coords, &rhs.coords);
            acc.record(err, &x, || {
                format!(
                    "group element {}: map-then-act gives {}, act-then-map gives {}",
                    fmt_c(t),
                    fmt_coords(&rhs.coords),
                    fmt_coords(&lhs.coords)
                )
            });
        }
    }
    acc.finish()
}

/// Every atlas transition and embedding, and every first-step map,
/// commutes with the weighted circle actions of its charts.
pub(crate) fn equivariance<T: Scalar>(suite: &SuiteData, cfg: &CheckConfig) -> Vec<CheckRecord> {
    let f = &suite.first;
    let mut maps: Vec<&TransitionMap> = suite.atlas5.transitions.iter().collect();
    maps.push(&suite.atlas5.embedding);
    maps.extend([
        &f.embed,
        &f.embed2,
        &f.iota,
        &f.iota_prime,
        &f.pi,
        &f.pi_prime,
        &f.normalize,
        &f.cover,
    ]);
    maps.into_iter()
        .map(|m| equivariance_one::<T>(suite, cfg, m))
        .collect()
}

fn root_of_unity<T: Scalar>(order: i64, power: i64) -> Complex<T> {
    let tau = T::PI() + T::PI();
    let frac = from_f64::<T>(power.rem_euclid(order) as f64 / order as f64);
    Complex::from_polar(T::one(), tau * frac)
}

/// The a-to-1 covering of the primed chart collapses exactly the orbits
/// of the deck rotation (whose weights encode `r = a b_1 - a_1`).
pub(crate) fn za_collapse<T: Scalar>(suite: &SuiteData, cfg: &CheckConfig) -> CheckRecord {
    let name = "za_collapse";
    if suite.fiber.a() == 1 {
        return CheckRecord {
            name: name.to_string(),
            passed: true,
            samples: 0,
            max_error: 0.0,
            tolerance: cfg.tol,
            note: Some("the deck group is trivial for a = 1".to_string()),
            witness: None,
        };
    }
    let (a, a1) = suite.za();
    let mut acc = Acc::new(name, cfg.tol);
    let pi_prime = &suite.first.pi_prime;
    let mut rng = check_rng(cfg.seed, name);
    'points: for _ in 0..cfg.samples_per_check {
        let x: ChartPoint<T> = sample_shape(
            &mut rng,
            &pi_prime.src,
            pi_prime.tag.src_shape(),
            None,
            cfg.radius_range,
        );
        let base = match pi_prime.eval(&x) {
            Ok(v) => v,
            Err(e) => {
                acc.eval_failed(&e, &x);
                break 'points;
            }
        };
        for k in 1..a {
            let rotated = ChartPoint::new(
                x.chart.clone(),
                vec![
                    x.coords[0] * root_of_unity::<T>(a, a1 * k),
                    x.coords[1] * root_of_unity::<T>(a, k),
                    x.coords[2] * root_of_unity::<T>(a, k),
                ],
            );
            let moved = match pi_prime.eval(&rotated) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &rotated);
                    break 'points;
                }
            };
            let err = scaled_distance(&base.coords, &moved.coords);
            acc.record(err, &x, || {
                format!(
                    "deck rotation k = {k} maps to {} instead of {}",
                    fmt_coords(&moved.coords),
                    fmt_coords(&base.coords)
                )
            });
        }
    }
    acc.finish()
}

/// The two closed-form composition identities of the first step: the
/// chain gluing factors through the renormalized model, and both chart
/// identifications agree over the gluing.
pub(crate) fn compositions<T: Scalar>(suite: &SuiteData, cfg: &CheckConfig) -> Vec<CheckRecord> {
    let f = &suite.first;
    let mut out = Vec::with_capacity(2);

    {
        let name = "composition/chain_g1";
        let mut acc = Acc::new(name, cfg.tol);
        let lhs_map = TransitionMap::new(
            MapTag::ChainG { b: f.b1, index: 1 },
            f.chart_x.id.clone(),
            "Xnext",
        );
        let embed_next = TransitionMap::new(MapTag::EmbedE1, f.chart_xs.id.clone(), "Xnext");
        let mut rng = check_rng(cfg.seed, name);
        'points: for _ in 0..cfg.samples_per_check {
            let x: ChartPoint<T> = sample_shape(
                &mut rng,
                &f.chart_x.id,
                lhs_map.tag.src_shape(),
                None,
                cfg.radius_range,
            );
            let lhs = match lhs_map.eval(&x) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            let rhs = match f
                .glue
                .eval_inverse(&x)
                .and_then(|p| f.normalize.eval(&p))
                .and_then(|p| embed_next.eval(&p))
            {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            let err = scaled_distance(&lhs.coords, &rhs.coords);
            acc.record(err, &x, || {
                format!(
                    "chain gluing gives {}, factored route gives {}",
                    fmt_coords(&lhs.coords),
                    fmt_coords(&rhs.coords)
                )
            });
        }
        out.push(acc.finish());
    }

    {
        let name = "composition/iota_glue";
        let mut acc = Acc::new(name, cfg.tol);
        let mut rng = check_rng(cfg.seed, name);
        'points: for _ in 0..cfg.samples_per_check {
            let x: ChartPoint<T> = sample_shape(
                &mut rng,
                &f.chart_xp.id,
                f.glue.tag.src_shape(),
                None,
                cfg.radius_range,
            );
            let lhs = match f.glue.eval(&x).and_then(|p| f.iota.eval(&p)) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            let rhs = match f.iota_prime.eval(&x) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            let err = scaled_distance(&lhs.coords, &rhs.coords);
            acc.record(err, &x, || {
                format!(
                    "glued identification gives {}, direct identification gives {}",
                    fmt_coords(&lhs.coords),
                    fmt_coords(&rhs.coords)
                )
            });
        }
        out.push(acc.finish());
    }

    out
}

/// Where a sampled comparison draws its inputs from.
struct Domain<'a> {
    chart: &'a str,
    shape: &'a [SlotKind],
    range: (f64, f64),
}

/// Runs one sampled comparison of two closures over points of a shape.
/// Used by the quotient and 4-d checks, which all share this skeleton.
fn compare_sampled<T, FL, FR, FE>(
    name: &str,
    cfg: &CheckConfig,
    dom: Domain<'_>,
    lhs_f: FL,
    rhs_f: FR,
    err_f: FE,
) -> CheckRecord
where
    T: Scalar,
    FL: Fn(&ChartPoint<T>) -> crate::error::Result<Vec<Complex<T>>>,
    FR: Fn(&ChartPoint<T>) -> crate::error::Result<Vec<Complex<T>>>,
    FE: Fn(&[Complex<T>], &[Complex<T>]) -> T,
{
    let mut acc = Acc::new(name, cfg.tol);
    let mut rng = check_rng(cfg.seed, name);
    for _ in 0..cfg.samples_per_check {
        let x: ChartPoint<T> = sample_shape(&mut rng, dom.chart, dom.shape, None, dom.range);
        let lhs = match lhs_f(&x) {
            Ok(v) => v,
            Err(e) => {
                acc.eval_failed(&e, &x);
                break;
            }
        };
        let rhs = match rhs_f(&x) {
            Ok(v) => v,
            Err(e) => {
                acc.eval_failed(&e, &x);
                break;
            }
        };
        let err = err_f(&lhs, &rhs);
        acc.record(err, &x, || {
            format!(
                "left route gives {}, right route gives {}",
                fmt_coords(&lhs),
                fmt_coords(&rhs)
            )
        });
    }
    acc.finish()
}

/// Compatibility between the 5-d picture and its circle quotient: the
/// descended maps agree with the boundary model on the tori, and the
/// quotient of every 5-d gluing/embedding is the corresponding 4-d map.
pub(crate) fn quotient<T: Scalar>(suite: &SuiteData, cfg: &CheckConfig) -> Vec<CheckRecord> {
    let f = &suite.first;
    let (r, a) = (suite.fiber.r(), suite.fiber.a());
    let (deck_a, deck_a1) = suite.za();
    let boundary = &suite.atlas4.boundary;
    let mut out = Vec::new();

    // Boundary-torus comparisons of the three descended maps.
    let desc = TransitionMap::new(
        MapTag::DescendedG { r, a },
        boundary.f3.src.clone(),
        boundary.f3.dst.clone(),
    );
    out.push(compare_sampled::<T, _, _, _>(
        "quotient/descended_torus",
        cfg,
        Domain {
            chart: &boundary.f3.src,
            shape: &[D, S],
            range: cfg.radius_range,
        },
        |x| desc.eval(x).map(|p| p.coords),
        |x| boundary.f3.eval(x).map(|p| p.coords),
        |l, rr| scaled_distance(l, rr),
    ));

    let qe1 = TransitionMap::new(
        MapTag::QuotEmbed1 { r, a },
        boundary.h1.src.clone(),
        boundary.h1.dst.clone(),
    );
    out.push(compare_sampled::<T, _, _, _>(
        "quotient/embed1_torus",
        cfg,
        Domain {
            chart: &boundary.h1.src,
            shape: &[S, D],
            range: cfg.radius_range,
        },
        |x| qe1.eval(x).map(|p| p.coords),
        |x| boundary.h1.eval(x).map(|p| p.coords),
        |l, rr| scaled_distance(l, rr),
    ));

    let qe2 = TransitionMap::new(
        MapTag::QuotEmbed2 { r, a },
        boundary.h2.src.clone(),
        boundary.h2.dst.clone(),
    );
    out.push(compare_sampled::<T, _, _, _>(
        "quotient/embed2_torus",
        cfg,
        Domain {
            chart: &boundary.h2.src,
            shape: &[D, S],
            range: cfg.radius_range,
        },
        |x| qe2.eval(x).map(|p| p.coords),
        |x| boundary.h2.eval(x).map(|p| p.coords),
        |l, rr| za_orbit_distance(deck_a, deck_a1, l, rr),
    ));

    // The gluing square: quotient of (gluing ∘ covering) equals the
    // descended gluing on the dropped coordinates.
    let desc_bar = TransitionMap::new(
        MapTag::DescendedG { r, a },
        format!("{}_bar", f.chart_xptil.id),
        format!("{}_bar", f.chart_x.id),
    );
    out.push(compare_sampled::<T, _, _, _>(
        "quotient/square_gluing",
        cfg,
        Domain {
            chart: &f.chart_xptil.id,
            shape: &[P, Q, S],
            range: cfg.radius_range,
        },
        |x| {
            f.pi_prime
                .eval(x)
                .and_then(|p| f.glue.eval(&p))
                .and_then(|p| quotient_point(&f.chart_x, &p))
                .map(|p| p.coords)
        },
        |x| {
            quotient_point(&f.chart_xptil, x)
                .and_then(|p| desc_bar.eval(&p))
                .map(|p| p.coords)
        },
        |l, rr| scaled_distance(l, rr),
    ));

    // The first embedding square: quotient of (embedding ∘ covering)
    // equals the descended embedding.
    let qe1_bar = TransitionMap::new(
        MapTag::QuotEmbed1 { r, a },
        format!("{}_bar", f.model_cover.id),
        format!("{}_bar", f.chart_x.id),
    );
    out.push(compare_sampled::<T, _, _, _>(
        "quotient/square_embed1",
        cfg,
        Domain {
            chart: &f.model_cover.id,
            shape: &[S, Q, P],
            range: cfg.radius_range,
        },
        |x| {
            f.cover
                .eval(x)
                .and_then(|p| f.embed1.eval(&p))
                .and_then(|p| quotient_point(&f.chart_x, &p))
                .map(|p| p.coords)
        },
        |x| {
            quotient_point(&f.model_cover, x)
                .and_then(|p| qe1_bar.eval(&p))
                .map(|p| p.coords)
        },
        |l, rr| scaled_distance(l, rr),
    ));

    // The second embedding square. The primed chart has no weight-one
    // circle slot, so its quotient is taken through the covering chart:
    // the principal section w with w^{-a} equal to the circle coordinate
    // lifts the point, and the lift is unique up to the deck action on
    // the dropped coordinates.
    let qe2_bar = TransitionMap::new(
        MapTag::QuotEmbed2 { r, a },
        format!("{}_bar", f.model_cover.id),
        format!("{}_bar", f.chart_xptil.id),
    );
    out.push(compare_sampled::<T, _, _, _>(
        "quotient/square_embed2",
        cfg,
        Domain {
            chart: &f.model_cover.id,
            shape: &[S, P, Q],
            range: cfg.radius_range,
        },
        |x| {
            let y = f.cover.eval(x).and_then(|p| f.embed2.eval(&p))?;
            let w =
                Complex::from_polar(T::one(), -unit(y.coords[2]).arg() / from_f64::<T>(a as f64));
            Ok(vec![y.coords[0] * cpowi(w, -r), y.coords[1] * w])
        },
        |x| {
            quotient_point(&f.model_cover, x)
                .and_then(|p| qe2_bar.eval(&p))
                .map(|p| p.coords)
        },
        |l, rr| za_orbit_distance(deck_a, deck_a1, l, rr),
    ));

    // Each chain gluing commutes with the quotient on the unit-circle
    // locus of the outgoing coordinate (only there do the coefficient
    // exponents on both sides cancel exactly).
    let n = suite.atlas5.chain_length();
    for i in 1..n {
        let name = format!("quotient/square_chain[{i}]");
        let src5 = &suite.atlas5.charts[i - 1];
        let dst5 = &suite.atlas5.charts[i];
        let t5 = &suite.atlas5.transitions[i - 1];
        let t4 = &suite.atlas4.transitions[i - 1];
        out.push(compare_sampled::<T, _, _, _>(
            &name,
            cfg,
            Domain {
                chart: &src5.id,
                shape: &[P, S, S],
                range: cfg.radius_range,
            },
            |x| {
                t5.eval(x)
                    .and_then(|p| quotient_point(dst5, &p))
                    .map(|p| p.coords)
            },
            |x| {
                quotient_point(src5, x)
                    .map(|p| p.with_chart(t4.src.clone()))
                    .and_then(|p| t4.eval(&p))
                    .map(|p| p.coords)
            },
            |l, rr| scaled_distance(l, rr),
        ));
    }

    // The final gluing square: the last 4-d gluing applied to the
    // quotient of the last chain chart matches the quotient of the primed
    // chart pulled back through the final gluing. The primed chart sees
    // the chain from the far end, so its quotient coordinates attach in
    // reversed order.
    {
        let name = "quotient/square_final";
        let xn = &suite.atlas5.charts[n - 1];
        let xpn = &suite.atlas5.charts[n];
        let glue = suite.atlas5.final_transition();
        let t4 = &suite.atlas4.transitions[n - 1];
        out.push(compare_sampled::<T, _, _, _>(
            name,
            cfg,
            Domain {
                chart: &xn.id,
                shape: &[P, S, S],
                range: cfg.radius_range,
            },
            |x| {
                quotient_point(xn, x)
                    .map(|p| p.with_chart(t4.src.clone()))
                    .and_then(|p| t4.eval(&p))
                    .map(|p| p.coords)
            },
            |x| {
                let q = glue.eval_inverse(x).and_then(|p| quotient_point(xpn, &p))?;
                Ok(vec![q.coords[1], q.coords[0]])
            },
            |l, rr| scaled_distance(l, rr),
        ));
    }

    out
}

fn sample_pattern<T: Scalar>(
    rng: &mut rand_chacha::ChaCha12Rng,
    chart: &str,
    pattern: &[SlotPattern],
    range: (f64, f64),
) -> ChartPoint<T> {
    let coords = pattern
        .iter()
        .map(|p| match p {
            SlotPattern::Zero => Complex::new(T::zero(), T::zero()),
            SlotPattern::Circle => unit_complex(rng),
            SlotPattern::Plane => super::sample::sample_slot(rng, SlotKind::PuncturedPlane, range),
        })
        .collect();
    ChartPoint::new(chart, coords)
}

/// The exceptional chain: each gluing restricts on the component locus to
/// the expected sphere-gluing normal form, the final gluing preserves the
/// last component, and the intersection circles are where they should be
/// and are preserved by the circle action.
pub(crate) fn exceptional<T: Scalar>(suite: &SuiteData, cfg: &CheckConfig) -> Vec<CheckRecord> {
    let n = suite.atlas5.chain_length();
    let chain = &suite.atlas5.exceptional;
    let mut out = Vec::new();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());

    for j in 1..n {
        let name = format!("exceptional/restriction[{j}]");
        let mut acc = Acc::new(&name, cfg.tol);
        let view = &chain.components[j - 1].views[0];
        let t5 = &suite.atlas5.transitions[j - 1];
        if view.chart != t5.src {
            acc.structural_failure(format!(
                "component {j} is not viewed in the source of gluing {j}"
            ));
            out.push(acc.finish());
            continue;
        }
        let mut rng = check_rng(cfg.seed, &name);
        'points: for _ in 0..cfg.samples_per_check {
            let x: ChartPoint<T> =
                sample_pattern(&mut rng, &view.chart, &view.pattern, cfg.radius_range);
            let y = match t5.eval(&x) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            let expected = [one / x.coords[2], x.coords[1], zero];
            let err = scaled_distance(&y.coords, &expected);
            acc.record(err, &x, || {
                format!(
                    "restriction maps to {}, expected {}",
                    fmt_coords(&y.coords),
                    fmt_coords(&expected)
                )
            });
        }
        out.push(acc.finish());
    }

    {
        let name = "exceptional/final_gluing";
        let mut acc = Acc::new(name, cfg.tol);
        let last = &chain.components[n - 1];
        let view = &last.views[1];
        let glue = suite.atlas5.final_transition();
        if view.chart != glue.src {
            acc.structural_failure(
                "last component is not viewed in the source of the final gluing".to_string(),
            );
        } else {
            let mut rng = check_rng(cfg.seed, name);
            'points: for _ in 0..cfg.samples_per_check {
                let x: ChartPoint<T> =
                    sample_pattern(&mut rng, &view.chart, &view.pattern, cfg.radius_range);
                let y = match glue.eval(&x) {
                    Ok(v) => v,
                    Err(e) => {
                        acc.eval_failed(&e, &x);
                        break 'points;
                    }
                };
                let norm1 = x.coords[1].norm();
                let expected = [zero, unit(x.coords[1]), x.coords[2] / norm1];
                let forward = scaled_distance(&y.coords, &expected);
                let back = match glue.eval_inverse(&y) {
                    Ok(v) => v,
                    Err(e) => {
                        acc.eval_failed(&e, &x);
                        break 'points;
                    }
                };
                let round = scaled_distance(&back.coords, &x.coords);
                let err = if forward > round { forward } else { round };
                acc.record(err, &x, || {
                    format!(
                        "gluing maps to {}, expected {} (roundtrip {})",
                        fmt_coords(&y.coords),
                        fmt_coords(&expected),
                        fmt_coords(&back.coords)
                    )
                });
            }
        }
        out.push(acc.finish());
    }

    for j in 1..n {
        let name = format!("exceptional/circle[{j}]");
        let mut acc = Acc::new(&name, cfg.tol);
        let circle = &chain.circles[j - 1];
        let on_left = chain.components[j - 1]
            .views
            .iter()
            .find(|v| v.chart == circle.chart);
        let on_right = chain.components[j]
            .views
            .iter()
            .find(|v| v.chart == circle.chart);
        let contained = match (on_left, on_right) {
            (Some(l), Some(rv)) => {
                circle
                    .pattern
                    .iter()
                    .zip(l.pattern.iter())
                    .all(|(c, v)| c.within(*v))
                    && circle
                        .pattern
                        .iter()
                        .zip(rv.pattern.iter())
                        .all(|(c, v)| c.within(*v))
            }
            _ => false,
        };
        if !contained {
            acc.structural_failure(format!(
                "circle {j} does not lie in both adjacent components in chart {}",
                circle.chart
            ));
            out.push(acc.finish());
            continue;
        }
        let weights = match suite.chart_weights(&circle.chart) {
            Ok(w) => w,
            Err(e) => {
                acc.structural_failure(e.to_string());
                out.push(acc.finish());
                continue;
            }
        };
        let mut rng = check_rng(cfg.seed, &name);
        'points: for _ in 0..cfg.samples_per_check {
            let x: ChartPoint<T> =
                sample_pattern(&mut rng, &circle.chart, &circle.pattern, cfg.radius_range);
            let t: Complex<T> = unit_complex(&mut rng);
            let moved = match act(weights, t, &x) {
                Ok(v) => v,
                Err(e) => {
                    acc.eval_failed(&e, &x);
                    break 'points;
                }
            };
            // The action must keep the circle locus inside itself.
            let mut err = T::zero();
            for (k, kind) in circle.pattern.iter().enumerate() {
                let m = moved.coords[k].norm();
                let dev = match kind {
                    SlotPattern::Zero => m,
                    SlotPattern::Circle => (m - T::one()).abs(),
                    SlotPattern::Plane => T::zero(),
                };
                if dev > err {
                    err = dev;
                }
            }
            acc.record(err, &x, || {
                format!(
                    "action moved a circle point off its locus: {}",
                    fmt_coords(&moved.coords)
                )
            });
        }
        out.push(acc.finish());
    }

    out
}

/// The 4-d atlas checks: overlap (cocycle) agreement of the two routes
/// into every chart, gluing roundtrips, and the two-chart reduction's
/// gluing, deck invariance, and end-chart identity.
pub(crate) fn reid<T: Scalar>(suite: &SuiteData, cfg: &CheckConfig) -> Vec<CheckRecord> {
    let n = suite.atlas4.chain_length();
    let (r, a) = (suite.fiber.r(), suite.fiber.a());
    let range = power_safe_range(r);
    let mut out = Vec::new();

    for i in 0..n {
        let name = format!("reid/cocycle[{i}]");
        let route_a_pre = suite.atlas4.plane_route(i);
        let route_b = suite.atlas4.general_embedding(i + 1);
        let (route_a_pre, route_b) = match (route_a_pre, route_b) {
            (Ok(x), Ok(y)) => (x, y),
            _ => {
                let mut acc = Acc::new(&name, cfg.tol);
                acc.structural_failure("could not assemble the two routes".to_string());
                out.push(acc.finish());
                continue;
            }
        };
        let step = &suite.atlas4.transitions[i];
        out.push(compare_sampled::<T, _, _, _>(
            &name,
            cfg,
            Domain {
                chart: &suite.atlas4.model.id,
                shape: &[Q, Q],
                range,
            },
            |x| {
                route_a_pre
                    .eval(x)
                    .and_then(|p| step.eval(&p))
                    .map(|p| p.coords)
            },
            |x| route_b.eval(x).map(|p| p.coords),
            |l, rr| scaled_distance(l, rr),
        ));
    }

    for i in 0..n {
        let name = format!("reid/roundtrip[{i}]");
        let t = &suite.atlas4.transitions[i];
        out.push(compare_sampled::<T, _, _, _>(
            &name,
            cfg,
            Domain {
                chart: &t.src,
                shape: &[P, Q],
                range,
            },
            |x| t.eval(x).and_then(|p| t.eval_inverse(&p)).map(|p| p.coords),
            |x| Ok(x.coords.clone()),
            |l, rr| scaled_distance(l, rr),
        ));
    }

    if let Some(tc) = &suite.atlas4.two_chart {
        let (deck_a, deck_a1) = tc.za;

        out.push(compare_sampled::<T, _, _, _>(
            "reid/two_chart_overlap",
            cfg,
            Domain {
                chart: &suite.atlas4.model.id,
                shape: &[Q, Q],
                range,
            },
            |x| {
                tc.embed_frac
                    .eval(x)
                    .and_then(|p| tc.gluing.eval(&p))
                    .map(|p| p.coords)
            },
            |x| tc.embed_plane.eval(x).map(|p| p.coords),
            |l, rr| scaled_distance(l, rr),
        ));

        {
            let name = "reid/two_chart_invariance";
            let mut acc = Acc::new(name, cfg.tol);
            let mut rng = check_rng(cfg.seed, name);
            'points: for _ in 0..cfg.samples_per_check {
                let x: ChartPoint<T> = sample_shape(
                    &mut rng,
                    &tc.chart_yprime.id,
                    tc.gluing.tag.src_shape(),
                    None,
                    range,
                );
                let base = match tc.gluing.eval(&x) {
                    Ok(v) => v,
                    Err(e) => {
                        acc.eval_failed(&e, &x);
                        break 'points;
                    }
                };
                for k in 1..deck_a {
                    let rotated = ChartPoint::new(
                        x.chart.clone(),
                        vec![
                            x.coords[0] * root_of_unity::<T>(deck_a, deck_a1 * k),
                            x.coords[1] * root_of_unity::<T>(deck_a, k),
                        ],
                    );
                    let moved = match tc.gluing.eval(&rotated) {
                        Ok(v) => v,
                        Err(e) => {
                            acc.eval_failed(&e, &rotated);
                            break 'points;
                        }
                    };
                    let err = scaled_distance(&base.coords, &moved.coords);
                    acc.record(err, &x, || {
                        format!(
                            "deck rotation k = {k} changes the gluing image to {}",
                            fmt_coords(&moved.coords)
                        )
                    });
                }
            }
            out.push(acc.finish());
        }

        {
            // Swapping the primed end chart and re-embedding with the
            // reduced type's data reproduces the second chain embedding:
            // the identity that encodes r + a_1 = a b_1 on the far chart.
            let name = "reid/two_chart_y2_identity";
            let b1 = suite.expansion.coefficients[0];
            let swap_embed = TransitionMap::new(
                MapTag::ReidEmbed0 {
                    r: deck_a,
                    a: deck_a1,
                },
                "Yp_swapped",
                "Y1_again",
            );
            let direct = TransitionMap::new(
                MapTag::ReidEmbed1 { r, a, b1 },
                suite.atlas4.model.id.clone(),
                "Y1_again",
            );
            out.push(compare_sampled::<T, _, _, _>(
                name,
                cfg,
                Domain {
                    chart: &suite.atlas4.model.id,
                    shape: &[Q, Q],
                    range,
                },
                |x| {
                    let fp = tc.embed_frac.eval(x)?;
                    let swapped = ChartPoint::new("Yp_swapped", vec![fp.coords[1], fp.coords[0]]);
                    swap_embed.eval(&swapped).map(|p| p.coords)
                },
                |x| direct.eval(x).map(|p| p.coords),
                |l, rr| scaled_distance(l, rr),
            ));
        }
    }

    out
}
