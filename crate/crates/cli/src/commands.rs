use std::collections::BTreeMap;
use std::fmt;
use std::fs;

use mbqc_core::circuit::{build_fanout, build_parity_via_fanout, expand_fanout};
use mbqc_core::pattern::standardize_dependent_measurements;
use mbqc_core::report::{depth_report, DepthReport};
use mbqc_core::schemes::{
    builtin_scheme, scheme_channel_with, scheme_to_fanout_circuit, scheme_to_pattern, Scheme,
};
use mbqc_core::simulate::{
    channels_equal, circuit_channel, circuit_stabilizer_choi, enumerate_branches,
    pattern_channel_with, pattern_stabilizer_choi, run_pattern, Channel, Oracle, SimOptions,
    StabilizerChoi, StateVector, MAX_CIRCUIT_QUBITS,
};
use mbqc_core::text::{self, Document};
use mbqc_core::transpile::{
    circuit_to_pattern, fanout_pattern, parity_pattern, pattern_to_fanout_circuit,
    TranslationReport,
};
use mbqc_core::{Alpha0, Circuit, Error as CoreError, Pattern, QubitId};
use serde::Serialize;
use serde_json::json;

use crate::{Branch, Cli, Cmd, Demo, Format, Model, Target};

#[derive(Debug)]
pub enum Fail {
    Invalid(String),
    Verify(String),
}

impl Fail {
    pub fn code(&self) -> u8 {
        match self {
            Fail::Invalid(_) => 2,
            Fail::Verify(_) => 3,
        }
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fail::Invalid(m) => write!(f, "{m}"),
            Fail::Verify(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<CoreError> for Fail {
    fn from(e: CoreError) -> Self {
        Fail::Invalid(e.to_string())
    }
}

type Out<T> = Result<T, Fail>;

struct Ctx<'a> {
    cli: &'a Cli,
    opts: SimOptions,
}

impl Ctx<'_> {
    fn machine(&self) -> bool {
        self.cli.format == Format::Machine
    }

    /// Human text, or the JSON document in machine mode.
    fn emit(&self, human: &str, doc: serde_json::Value) {
        if self.machine() {
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        } else {
            print!("{human}");
        }
    }
}

fn alpha0(spec: Option<&str>) -> Out<Alpha0> {
    let Some(s) = spec else {
        return Ok(Alpha0::default());
    };
    let bad = || Fail::Invalid(format!("bad --alpha0 `{s}`, expected p/q"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: i64 = p.trim().parse().map_err(|_| bad())?;
    let q: i64 = q.trim().parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Alpha0::from_pi_fraction(p, q))
}

pub fn run(cli: &Cli) -> Out<()> {
    let opts = SimOptions {
        alpha0: alpha0(cli.alpha0.as_deref())?,
        ..SimOptions::default()
    };
    let ctx = Ctx { cli, opts };
    match &cli.command {
        Cmd::Stats { file } => stats(&ctx, &load(file)?),
        Cmd::Compile {
            file,
            target,
            scheme,
            output,
            verify,
        } => compile(
            &ctx,
            &load(file)?,
            *target,
            scheme.as_deref(),
            output.as_deref(),
            *verify,
        ),
        Cmd::Sim {
            file,
            input,
            branch,
        } => sim(&ctx, &load(file)?, input.as_deref(), *branch),
        Cmd::Demo {
            kind,
            n,
            model,
            output,
        } => demo(&ctx, *kind, *n, *model, output.as_deref()),
    }
}

fn load(path: &str) -> Out<Document> {
    let src = fs::read_to_string(path).map_err(|e| Fail::Invalid(format!("{path}: {e}")))?;
    text::parse(&src).map_err(|e| Fail::Invalid(format!("{path}:{e}")))
}

fn scheme_named(name: &str) -> Out<Scheme> {
    builtin_scheme(name).ok_or_else(|| Fail::Invalid(format!("unknown scheme `{name}`")))
}

fn checked(t: &Pattern) -> Out<()> {
    let v = t.validate();
    if v.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    Err(Fail::Invalid(format!(
        "pattern is not well formed:\n  {}",
        list.join("\n  ")
    )))
}

fn report_text(r: &DepthReport) -> String {
    let widths: Vec<String> = r
        .layers
        .iter()
        .map(|l| l.signal_width.to_string())
        .collect();
    format!(
        "size {}\nquantum depth {}\nclassical depth (constant model) {}\nclassical depth (log model) {}\nmax signal width {}\nsignal width per layer {}\n",
        r.size,
        r.quantum_depth,
        r.classical_depth_constant_model,
        r.classical_depth_log_model,
        r.max_signal_width,
        widths.join(" ")
    )
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CircuitStats {
    qubits: usize,
    size: usize,
    depth: usize,
    fanout_gates: usize,
}

fn circuit_stats(c: &Circuit) -> CircuitStats {
    CircuitStats {
        qubits: c.register.len(),
        size: c.size(),
        depth: c.depth(),
        fanout_gates: c
            .gates
            .iter()
            .filter(|g| matches!(g, mbqc_core::Gate::FanOut { .. }))
            .count(),
    }
}

fn circuit_text(s: &CircuitStats) -> String {
    format!(
        "qubits {}\nsize {}\ndepth {}\nfan-out gates {}\n",
        s.qubits, s.size, s.depth, s.fanout_gates
    )
}

fn stats(ctx: &Ctx, d: &Document) -> Out<()> {
    match d {
        Document::Pattern(t) => {
            checked(t)?;
            let r = depth_report(t)?;
            ctx.emit(&report_text(&r), json!({"kind": "pattern", "report": r}));
        }
        Document::Circuit(c) => {
            c.validate()?;
            let s = circuit_stats(c);
            ctx.emit(&circuit_text(&s), json!({"kind": "circuit", "stats": s}));
        }
        Document::Scheme(name, p) => {
            let s = scheme_named(name)?;
            let m = mbqc_core::schemes::scheme_metrics(p, &s)?;
            ctx.emit(
                &format!("scheme {name}\nsize {}\ndepth {}\n", m.size, m.depth),
                json!({"kind": "schemepattern", "scheme": name, "size": m.size, "depth": m.depth}),
            );
        }
    }
    Ok(())
}

fn channel(ctx: &Ctx, d: &Document) -> Out<Channel> {
    Ok(match d {
        Document::Pattern(t) => pattern_channel_with(t, &ctx.opts)?,
        Document::Circuit(c) if c.register.len() <= MAX_CIRCUIT_QUBITS => {
            circuit_channel(c, ctx.opts.alpha0)?
        }
        // the pattern engine traces discarded lines as it goes
        Document::Circuit(c) => pattern_channel_with(&circuit_to_pattern(c)?.0, &ctx.opts)?,
        Document::Scheme(name, p) => scheme_channel_with(p, &scheme_named(name)?, ctx.opts.alpha0)?,
    })
}

#[derive(Debug, Serialize)]
struct Verdict {
    equal: bool,
    method: &'static str,
    /// Absent for the stabilizer check, which is exact.
    distance: Option<f64>,
}

fn stabilizer(d: &Document) -> Out<Option<StabilizerChoi>> {
    Ok(match d {
        Document::Pattern(t) => pattern_stabilizer_choi(t)?,
        Document::Circuit(c) => circuit_stabilizer_choi(c)?,
        Document::Scheme(..) => None,
    })
}

// Clifford on both sides goes through the tableau, which has no width limit
fn compare(ctx: &Ctx, a: &Document, b: &Document) -> Out<Verdict> {
    if let (Some(x), Some(y)) = (stabilizer(a)?, stabilizer(b)?) {
        return Ok(Verdict {
            equal: x == y,
            method: "stabilizer",
            distance: None,
        });
    }
    let c = channels_equal(&channel(ctx, a)?, &channel(ctx, b)?, ctx.cli.tol)?;
    Ok(Verdict {
        equal: c.equal,
        method: "choi",
        distance: Some(c.distance),
    })
}

fn plain(t: &Pattern) -> Out<Pattern> {
    checked(t)?;
    if t.has_dependent_measurements() {
        Ok(standardize_dependent_measurements(t)?)
    } else {
        Ok(t.clone())
    }
}

fn translate(
    d: &Document,
    target: Target,
    scheme: Option<&str>,
) -> Out<(Document, Option<TranslationReport>)> {
    Ok(match d {
        Document::Pattern(t) => match target {
            Target::Pattern => (Document::Pattern(plain(t)?), None),
            Target::Fanout | Target::Strict => {
                let (c, r) = pattern_to_fanout_circuit(&plain(t)?)?;
                let c = if target == Target::Strict {
                    expand_fanout(&c)
                } else {
                    c
                };
                let r = TranslationReport::new(r.input, metrics(&c));
                (Document::Circuit(c), Some(r))
            }
        },
        Document::Circuit(c) => match target {
            Target::Pattern => {
                let (t, r) = circuit_to_pattern(c)?;
                (Document::Pattern(t), Some(r))
            }
            Target::Fanout => {
                c.validate()?;
                (Document::Circuit(c.clone()), None)
            }
            Target::Strict => {
                c.validate()?;
                let s = expand_fanout(c);
                let r = TranslationReport::new(metrics(c), metrics(&s));
                (Document::Circuit(s), Some(r))
            }
        },
        Document::Scheme(name, p) => {
            let s = scheme_named(scheme.unwrap_or(name))?;
            match target {
                Target::Pattern => {
                    let (t, r) = scheme_to_pattern(p, &s)?;
                    (Document::Pattern(t), Some(r))
                }
                Target::Fanout | Target::Strict => {
                    let (c, r) = scheme_to_fanout_circuit(p, &s)?;
                    let c = if target == Target::Strict {
                        expand_fanout(&c)
                    } else {
                        c
                    };
                    let r = TranslationReport::new(r.input, metrics(&c));
                    (Document::Circuit(c), Some(r))
                }
            }
        }
    })
}

fn metrics(c: &Circuit) -> mbqc_core::transpile::Metrics {
    mbqc_core::transpile::Metrics {
        size: c.size(),
        depth: c.depth(),
    }
}

fn compile(
    ctx: &Ctx,
    d: &Document,
    target: Target,
    scheme: Option<&str>,
    output: Option<&str>,
    verify: bool,
) -> Out<()> {
    let d = match (d, scheme) {
        (Document::Scheme(_, p), Some(s)) => Document::Scheme(s.to_string(), p.clone()),
        _ => d.clone(),
    };
    let (out, report) = translate(&d, target, scheme)?;
    let artifact = text::serialize(&out);
    let mut human = String::new();
    if let Some(r) = &report {
        human.push_str(&format!(
            "input size {} depth {}\noutput size {} depth {}\nratios size {:.3} depth {:.3}\n",
            r.input.size, r.input.depth, r.output.size, r.output.depth, r.size_ratio, r.depth_ratio
        ));
    }
    let mut verdict = None;
    if verify {
        let v = compare(ctx, &d, &out)?;
        match v.distance {
            Some(x) => human.push_str(&format!("verified {} (distance {x:.3e})\n", v.equal)),
            None => human.push_str(&format!("verified {} (stabilizer groups)\n", v.equal)),
        }
        verdict = Some(v);
    }
    match output {
        Some(path) => {
            fs::write(path, &artifact).map_err(|e| Fail::Invalid(format!("{path}: {e}")))?
        }
        None if !ctx.machine() => print!("{artifact}"),
        None => {}
    }
    let doc = json!({
        "report": report,
        "verification": verdict,
        "output": output,
        "artifact": if output.is_none() { Some(&artifact) } else { None },
    });
    if ctx.machine() {
        ctx.emit("", doc);
    } else if output.is_some() {
        print!("{human}");
    } else {
        eprint!("{human}");
    }
    match verdict {
        Some(Verdict {
            equal: false,
            distance: Some(x),
            ..
        }) => Err(Fail::Verify(format!(
            "Choi distance {x:.3e} exceeds {:e}",
            ctx.cli.tol
        ))),
        Some(Verdict { equal: false, .. }) => Err(Fail::Verify(
            "stabilizer groups of the Choi states differ".into(),
        )),
        _ => Ok(()),
    }
}

fn input_state(inputs: &[QubitId], spec: Option<&str>) -> Out<StateVector> {
    let spec = spec
        .map(str::to_string)
        .unwrap_or_else(|| "0".repeat(inputs.len()));
    Ok(StateVector::from_labels(inputs, &spec)?)
}

#[derive(Serialize)]
struct Row {
    outcomes: BTreeMap<u32, u8>,
    probability: f64,
    state: String,
}

fn as_pattern(d: &Document) -> Out<Option<Pattern>> {
    Ok(match d {
        Document::Pattern(t) => Some(plain(t)?),
        Document::Circuit(c) if c.is_unitary_form() => None,
        Document::Circuit(c) => Some(circuit_to_pattern(c)?.0),
        Document::Scheme(name, p) => Some(scheme_to_pattern(p, &scheme_named(name)?)?.0),
    })
}

fn sim(ctx: &Ctx, d: &Document, input: Option<&str>, branch: Branch) -> Out<()> {
    let rows: Vec<Row> = match (as_pattern(d)?, d) {
        (None, Document::Circuit(c)) => {
            c.validate()?;
            let psi = input_state(&c.inputs, input)?;
            let out = mbqc_core::simulate::apply_gates(&psi, &c.gates, ctx.opts.alpha0)?
                .reordered(&c.outputs)?;
            vec![Row {
                outcomes: BTreeMap::new(),
                probability: 1.0,
                state: out.fingerprint(),
            }]
        }
        (Some(t), _) => {
            let psi = input_state(&t.inputs, input)?;
            match branch {
                Branch::All => enumerate_branches(&t, &ctx.opts)?
                    .iter()
                    .filter_map(|b| {
                        b.on_input(&psi, &t.outputs).map(|(p, s)| Row {
                            outcomes: b.outcomes.iter().map(|(q, &v)| (q.0, v as u8)).collect(),
                            probability: p,
                            state: s.fingerprint(),
                        })
                    })
                    .collect(),
                Branch::Sample => {
                    let r = run_pattern(&t, &psi, &Oracle::Seeded(ctx.cli.seed), ctx.opts.alpha0)?;
                    vec![Row {
                        outcomes: r.outcomes.iter().map(|(q, v)| (q.0, *v as u8)).collect(),
                        probability: r.probability,
                        state: r.state.fingerprint(),
                    }]
                }
            }
        }
        (None, _) => unreachable!("only unitary circuits skip the pattern route"),
    };
    let mut human = format!("{} branch(es)\n", rows.len());
    for r in &rows {
        let o: Vec<String> = r
            .outcomes
            .iter()
            .map(|(q, v)| format!("s{q}={v}"))
            .collect();
        let o = if o.is_empty() {
            "-".to_string()
        } else {
            o.join(" ")
        };
        human.push_str(&format!("{o}  p={:.4}  {}\n", r.probability, r.state));
    }
    ctx.emit(&human, json!({ "branches": rows }));
    Ok(())
}

fn demo(ctx: &Ctx, kind: Demo, n: usize, model: Model, output: Option<&str>) -> Out<()> {
    if n == 0 {
        return Err(Fail::Invalid("--n must be at least 1".into()));
    }
    let doc = match (kind, model) {
        (Demo::Parity, Model::Circuit) => Document::Circuit(build_parity_via_fanout(n)?),
        (Demo::Fanout, Model::Circuit) => Document::Circuit(build_fanout(n)?),
        (Demo::Parity, Model::Pattern) => Document::Pattern(parity_pattern(n)?),
        (Demo::Fanout, Model::Pattern) => Document::Pattern(fanout_pattern(n)?),
    };
    let artifact = text::serialize(&doc);
    let (human, stats) = match &doc {
        Document::Pattern(t) => {
            let r = depth_report(t)?;
            (report_text(&r), json!({ "kind": "pattern", "report": r }))
        }
        Document::Circuit(c) => {
            let s = circuit_stats(c);
            (circuit_text(&s), json!({ "kind": "circuit", "stats": s }))
        }
        Document::Scheme(..) => unreachable!(),
    };
    if let Some(path) = output {
        fs::write(path, &artifact).map_err(|e| Fail::Invalid(format!("{path}: {e}")))?;
    }
    if ctx.machine() {
        let mut doc = stats;
        doc["output"] = json!(output);
        doc["artifact"] = json!(output.is_none().then_some(&artifact));
        ctx.emit("", doc);
    } else if output.is_some() {
        print!("{human}");
    } else {
        eprint!("{human}");
        print!("{artifact}");
    }
    Ok(())
}
