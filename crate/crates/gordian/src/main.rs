//! Command-line front end. Exit codes: 0 success, 1 input error,
//! 2 computation guard tripped (crossing limit / search ceiling),
//! 3 internal invariant failure.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gordian::error::Error;
use gordian::knotio::{component_count, parse_presentation, to_pd, Presentation, PresentationKind};
use gordian::obstruct::{
    decomposition_search, gordian_one_test, refined_bound, theorem_bound, BoundReport,
    GordianOutcome, SearchBounds,
};
use gordian::poly::LaurentPoly;
use gordian::selftest;
use gordian::sequences::{pretzel_sequence, twist_sequence, verify_sequence};
use gordian::skein::{a2_of, coefficient_polys, SkeinEngine};

#[derive(Parser)]
#[command(name = "gordian", version, about = "Exact HOMFLY polynomials and \
certified bounds for the genus non-increasing totally positive unknotting number")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// refuse diagrams with more crossings than this
    #[arg(long, default_value_t = 16)]
    max_crossings: usize,
}

#[derive(Args)]
struct Input {
    /// PD code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"
    #[arg(long)]
    pd: Option<String>,
    /// braid word, e.g. "2: 1 1 1"
    #[arg(long)]
    braid: Option<String>,
    /// odd band counts "a,b,c" of the pretzel knot P(a,b,c)
    #[arg(long)]
    pretzel: Option<String>,
    /// even twist count 2m of the twist knot T_2m
    #[arg(long)]
    twist: Option<String>,
}

impl Input {
    fn presentation(&self) -> Result<Presentation, Error> {
        let given = [
            (&self.pd, PresentationKind::Pd),
            (&self.braid, PresentationKind::Braid),
            (&self.pretzel, PresentationKind::Pretzel),
            (&self.twist, PresentationKind::Twist),
        ];
        let mut chosen = None;
        for (text, kind) in given {
            if let Some(t) = text {
                if chosen.is_some() {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "give exactly one input presentation".into(),
                    });
                }
                chosen = Some(parse_presentation(t, kind)?);
            }
        }
        chosen.ok_or(Error::Parse {
            pos: 0,
            msg: "no input presentation (use --pd, --braid, --pretzel or --twist)".into(),
        })
    }

    fn is_family(&self) -> bool {
        self.pretzel.is_some() || self.twist.is_some()
    }
}

/// Second input for the two-knot gordian subcommand.
#[derive(Args)]
struct Input2 {
    #[arg(long)]
    pd2: Option<String>,
    #[arg(long)]
    braid2: Option<String>,
    #[arg(long)]
    pretzel2: Option<String>,
    #[arg(long)]
    twist2: Option<String>,
}

impl Input2 {
    fn as_input(&self) -> Input {
        Input {
            pd: self.pd2.clone(),
            braid: self.braid2.clone(),
            pretzel: self.pretzel2.clone(),
            twist: self.twist2.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the HOMFLY polynomial P(v, z)
    Homfly {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Print the coefficient polynomials p^i(v)
    P0 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Lower bounds from the zeroth coefficient polynomial (genus one knots)
    Bound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        /// ceiling for the refined per-length search
        #[arg(long, default_value_t = 32)]
        n_max: u64,
        /// acknowledge that the bound is conditional on genus one
        /// (required for raw --pd / --braid inputs)
        #[arg(long)]
        assert_genus_one: bool,
    },
    /// Can one positive-to-negative crossing change relate the two knots?
    Gordian {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        input2: Input2,
        /// sign of the crossing change, +1 or -1
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        eps: i8,
        #[arg(long)]
        assert_genus_one: bool,
    },
    /// Emit and verify an unknotting sequence for a family input
    Sequence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Search for an explicit square decomposition of length n
    Decompose {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        shift_lo: i64,
        #[arg(long, default_value_t = 8)]
        shift_hi: i64,
        #[arg(long, default_value_t = 2)]
        deg_span: u32,
        #[arg(long, default_value_t = 2)]
        coeff_bound: u32,
        #[arg(long)]
        assert_genus_one: bool,
    },
    /// Run the acceptance suite
    Selftest,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidDiagram(_) | Error::NotKnotP0(_) => 1,
        Error::CrossingLimit { .. } | Error::SearchCeiling { .. } => 2,
        Error::MalformedHomfly(_) | Error::NoSupport => 3,
    }
}

fn require_genus_assertion(input: &Input, asserted: bool) -> Result<(), Error> {
    if input.is_family() || asserted {
        Ok(())
    } else {
        Err(Error::Parse {
            pos: 0,
            msg: "bounds are conditional on genus one; pass --assert-genus-one \
                  for raw diagram inputs"
                .into(),
        })
    }
}

fn knot_p0(engine: &SkeinEngine, p: &Presentation) -> Result<LaurentPoly, Error> {
    let pd = to_pd(p)?;
    let n = component_count(&pd)?;
    if n != 1 {
        return Err(Error::InvalidDiagram(format!(
            "input has {n} components; bounds apply to knots"
        )));
    }
    Ok(coefficient_polys(&engine.homfly(&pd)?, 1)?.p0().clone())
}

fn emit<T: Serialize>(format: Format, json: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(json).unwrap()),
        Format::Text => println!("{}", text()),
    }
}

fn format_bound_text(kind: &str, r: &BoundReport) -> String {
    let rules: Vec<&str> = r.rules_fired.iter().map(|x| x.as_str()).collect();
    let mut line = format!("{kind} bound: {}, rules [{}]", r.bound, rules.join(", "));
    if r.exhausted {
        line.push_str(" (search exhausted; true bound may be higher)");
    }
    line
}

fn run() -> Result<(), (u8, String)> {
    let cli = Cli::parse();
    let fail = |e: Error| (exit_for(&e), e.to_string());
    match cli.command {
        Command::Homfly { common, input } => {
            let p = input.presentation().map_err(fail)?;
            let engine = SkeinEngine::new(common.max_crossings).with_cache();
            let h = engine.homfly_of(&p).map_err(fail)?;
            emit(common.format, &h, || format!("P = {h}"));
        }
        Command::P0 { common, input } => {
            let p = input.presentation().map_err(fail)?;
            let pd = to_pd(&p).map_err(fail)?;
            let n = component_count(&pd).map_err(fail)?;
            let engine = SkeinEngine::new(common.max_crossings).with_cache();
            let h = engine.homfly(&pd).map_err(fail)?;
            let decomp = coefficient_polys(&h, n).map_err(fail)?;
            #[derive(Serialize)]
            struct P0Out<'a> {
                component_count: usize,
                coefficient_polynomials: &'a [LaurentPoly],
            }
            emit(
                common.format,
                &P0Out { component_count: n, coefficient_polynomials: &decomp.coeffs },
                || {
                    let mut s = format!("components: {n}");
                    for (i, c) in decomp.coeffs.iter().enumerate() {
                        s.push_str(&format!("\np^{i} = {c}"));
                    }
                    s
                },
            );
        }
        Command::Bound { common, input, n_max, assert_genus_one } => {
            require_genus_assertion(&input, assert_genus_one).map_err(fail)?;
            let p = input.presentation().map_err(fail)?;
            let engine = SkeinEngine::new(common.max_crossings).with_cache();
            let p0 = knot_p0(&engine, &p).map_err(fail)?;
            let theorem = theorem_bound(&p0).map_err(fail)?;
            let refined = refined_bound(&p0, n_max).map_err(fail)?;
            #[derive(Serialize)]
            struct BoundOut {
                p0: LaurentPoly,
                theorem: BoundReport,
                refined: BoundReport,
            }
            let out = BoundOut { p0: p0.clone(), theorem, refined };
            emit(common.format, &out, || {
                format!(
                    "p^0 = {p0}\n{}\n{}\n(conditional on genus one)",
                    format_bound_text("theorem", &out.theorem),
                    format_bound_text("refined", &out.refined)
                )
            });
        }
        Command::Gordian { common, input, input2, eps, assert_genus_one } => {
            if eps != 1 && eps != -1 {
                return Err((1, "--eps must be +1 or -1".into()));
            }
            require_genus_assertion(&input, assert_genus_one).map_err(fail)?;
            let second = input2.as_input();
            require_genus_assertion(&second, assert_genus_one).map_err(fail)?;
            let engine = SkeinEngine::new(common.max_crossings).with_cache();
            let (pa, pb) = (input.presentation().map_err(fail)?, second.presentation().map_err(fail)?);
            let mut data = Vec::new();
            for p in [&pa, &pb] {
                let pd = to_pd(p).map_err(fail)?;
                if component_count(&pd).map_err(fail)? != 1 {
                    return Err((1, "gordian test inputs must be knots".into()));
                }
                let h = engine.homfly(&pd).map_err(fail)?;
                let p0 = coefficient_polys(&h, 1).map_err(fail)?.p0().clone();
                data.push((p0, a2_of(&h)));
            }
            let outcome = gordian_one_test(&data[0].0, &data[1].0, &data[0].1, &data[1].1, eps);
            #[derive(Serialize)]
            struct GordianOut {
                eps: i8,
                pass: bool,
                witness: Option<LaurentPoly>,
            }
            let (pass, witness) = match outcome {
                GordianOutcome::Pass { witness } => (true, witness),
                GordianOutcome::Fail => (false, None),
            };
            let out = GordianOut { eps, pass, witness };
            emit(common.format, &out, || match (&out.pass, &out.witness) {
                (true, Some(f)) => format!("pass: f = {f}"),
                (true, None) => "pass: identical invariants (distance 0 case)".into(),
                (false, _) => "fail: no single crossing change of this sign fits".into(),
            });
        }
        Command::Sequence { common, input } => {
            let p = input.presentation().map_err(fail)?;
            let cert = match p {
                Presentation::Pretzel(a, b, c) if a >= 0 && b >= 0 && c >= 0 => {
                    pretzel_sequence(a as u64, b as u64, c as u64)
                }
                Presentation::Twist(m) => twist_sequence(m),
                _ => {
                    return Err((
                        1,
                        "sequences exist for positive pretzel and twist inputs only".into(),
                    ))
                }
            };
            let engine = SkeinEngine::new(common.max_crossings.max(32)).with_cache();
            let report = verify_sequence(&cert, &engine).map_err(fail)?;
            #[derive(Serialize)]
            struct SequenceOut<'a> {
                certificate: &'a gordian::sequences::SequenceCertificate,
                verification: &'a gordian::sequences::VerificationReport,
            }
            emit(
                common.format,
                &SequenceOut { certificate: &cert, verification: &report },
                || {
                    let mut s = format!("unknotting sequence, length {}:", cert.claimed_length);
                    for (t, step) in cert.steps.iter().enumerate() {
                        s.push_str(&format!("\n  {step}"));
                        if t < cert.changes.len() {
                            s.push_str(&format!(
                                "\n    switch crossing {}",
                                cert.changes[t].crossing
                            ));
                        }
                    }
                    s.push_str(&format!(
                        "\nverification: {}",
                        if report.ok { "ok" } else { "FAILED" }
                    ));
                    for f in &report.failures {
                        s.push_str(&format!("\n  {f}"));
                    }
                    s
                },
            );
            if !report.ok {
                return Err((3, "generated sequence failed verification".into()));
            }
        }
        Command::Decompose {
            common,
            input,
            n,
            shift_lo,
            shift_hi,
            deg_span,
            coeff_bound,
            assert_genus_one,
        } => {
            require_genus_assertion(&input, assert_genus_one).map_err(fail)?;
            let p = input.presentation().map_err(fail)?;
            let engine = SkeinEngine::new(common.max_crossings).with_cache();
            let p0 = knot_p0(&engine, &p).map_err(fail)?;
            let bounds = SearchBounds {
                shift_lo,
                shift_hi,
                deg_span,
                coeff_bound,
                ..Default::default()
            };
            let found = decomposition_search(&p0, n, &bounds).map_err(fail)?;
            #[derive(Serialize)]
            struct DecomposeOut {
                p0: LaurentPoly,
                n: u64,
                certificate: Option<gordian::obstruct::DecompositionCertificate>,
            }
            let out = DecomposeOut { p0: p0.clone(), n, certificate: found };
            emit(common.format, &out, || match &out.certificate {
                Some(cert) => {
                    let mut s = format!("p^0 = {p0} decomposes with n = {n}:");
                    for (k, f) in cert.shifts.iter().zip(&cert.factors) {
                        s.push_str(&format!("\n  shift 2k = {}, f = {f}", 2 * k));
                    }
                    s
                }
                None => format!("no length-{n} decomposition within the search bounds"),
            });
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let mut ok = true;
            for r in &results {
                println!("{r}");
                ok &= r.passed;
            }
            if !ok {
                return Err((3, "selftest failures above".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
