//! `qic` — locate, audit and extract information capsules from multi-qubit
//! states.
//!
//! Exit codes: 0 on success, 2 on any validation or input failure (diagnostic
//! on stderr).

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use qic_core::config::{theta_grid, Tolerances};
use qic_core::corr::{check_equivalence, corr_state_single};
use qic_core::dynamics::{
    evolve_qic, fisher_conservation, mean_weight, HamiltonianSpec, Propagator,
};
use qic_core::info::{apply_write, extract, fisher_info, WriteOp};
use qic_core::io::{load_hamiltonian, load_state, VirtualQubitFile};
use qic_core::linalg::CVec;
use qic_core::qic::{
    check_qic_criteria, confinement_over_grid, disentangler, find_qic, ghz_fixture,
    max_entangled_partner, purity_curve_params, tilde_ops, MaxEntanglement, Qic,
};
use qic_core::qubit::{haar_random_state, reduced_density, schmidt_first_qubit, StateVector};

use report::{
    BellDemoReport, CapsuleReport, Envelope, ExtractPoint, ExtractReport, FisherBody,
    GhzDemoReport, InputDesc, MaxEntanglementReport, SweepBody, SweepRow, TrajectoryBody,
    TrajectoryRow, VerifyBody,
};

#[derive(Parser)]
#[command(
    name = "qic",
    version,
    about = "Locate, audit and extract information capsules in multi-qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a built-in state and emit a JSON report.
    Demo {
        /// Which built-in state to use.
        #[arg(value_enum)]
        name: DemoName,
        /// Seed for the haar demo.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Qubit count for the haar demo.
        #[arg(long, default_value_t = 4)]
        qubits: usize,
        #[command(flatten)]
        write: WriteArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Locate an information capsule and audit it.
    FindQic {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        write: WriteArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep the partner-coupling angle; table of predicted vs measured purity.
    SweepG {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        write: WriteArgs,
        /// Number of coupling angles over [0, π).
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..))]
        g_points: u32,
        /// Table format.
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Swap-extraction audit over the θ grid.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        write: WriteArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evolve under a Hamiltonian; CSV trajectory of Fisher information,
    /// confinement purity and operator spreading.
    Evolve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        write: WriteArgs,
        /// Hamiltonian JSON file.
        #[arg(long, value_name = "PATH", conflicts_with = "preset")]
        hamiltonian: Option<PathBuf>,
        /// Built-in Hamiltonian preset.
        #[arg(long, value_enum)]
        preset: Option<PresetName>,
        /// Coupling strength for the presets.
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        /// Transverse field (ising preset).
        #[arg(long, default_value_t = 0.5)]
        hx: f64,
        /// Anisotropy (xxz preset).
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Seed (random preset).
        #[arg(long, default_value_t = 1)]
        h_seed: u64,
        /// Final time.
        #[arg(long, default_value_t = 4.0)]
        t_max: f64,
        /// Number of time samples (including t = 0).
        #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u32).range(2..))]
        t_points: u32,
        /// Table format.
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fisher information of the write family.
    Fisher {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        write: WriteArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Validate a state file.
    Verify {
        /// State JSON file.
        #[arg(long, value_name = "PATH")]
        state: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Bell,
    Ghz,
    Haar,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetName {
    Ising,
    Xxz,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

/// Exactly one input source.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputSource {
    /// State JSON file.
    #[arg(long, value_name = "PATH")]
    state: Option<PathBuf>,
    /// Built-in demo state.
    #[arg(long, value_enum, value_name = "NAME")]
    demo: Option<DemoName>,
    /// Seeded Haar-random state.
    #[arg(long, value_name = "SEED")]
    haar: Option<u64>,
}

#[derive(Args)]
struct InputArgs {
    #[command(flatten)]
    source: InputSource,
    /// Qubit count for --haar.
    #[arg(long, default_value_t = 4)]
    qubits: usize,
}

#[derive(Args)]
struct WriteArgs {
    /// Write angle θ.
    #[arg(long, default_value_t = 0.3)]
    theta: f64,
    /// Write axis as "x,y,z" (unit vector).
    #[arg(long, default_value = "0,0,1", value_parser = parse_axis)]
    axis: Axis,
}

#[derive(Clone, Copy, Debug)]
struct Axis([f64; 3]);

fn parse_axis(raw: &str) -> std::result::Result<Axis, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected three comma-separated numbers, got {raw:?}"
        ));
    }
    let mut axis = [0.0f64; 3];
    for (slot, part) in axis.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad axis component {part:?}: {e}"))?;
    }
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err("axis must be nonzero".into());
    }
    for slot in &mut axis {
        *slot /= norm;
    }
    Ok(Axis(axis))
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Omit the timestamp so identical runs are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let tol = Tolerances::default();
    match cli.command {
        Command::Demo {
            name,
            seed,
            qubits,
            write,
            out,
        } => {
            let w = write_op(&write)?;
            match name {
                DemoName::Bell => {
                    let body = bell_demo(&w, &tol)?;
                    emit_json(
                        &out,
                        envelope("demo bell", &StateVector::bell(), &write, &out, body),
                    )
                }
                DemoName::Ghz => {
                    let body = ghz_demo(&w, &tol)?;
                    emit_json(
                        &out,
                        envelope("demo ghz", &StateVector::ghz(), &write, &out, body),
                    )
                }
                DemoName::Haar => {
                    let psi = haar_random_state(qubits, seed);
                    let body = capsule_report(&psi, &write, &tol)?;
                    emit_json(
                        &out,
                        envelope(&format!("demo haar seed={seed}"), &psi, &write, &out, body),
                    )
                }
            }
        }
        Command::FindQic { input, write, out } => {
            let (psi, source) = resolve_input(&input)?;
            let body = capsule_report(&psi, &write, &tol)?;
            emit_json(&out, envelope(&source, &psi, &write, &out, body))
        }
        Command::SweepG {
            input,
            write,
            g_points,
            format,
            out,
        } => {
            let (psi, source) = resolve_input(&input)?;
            let rows = sweep_rows(&psi, &write, g_points as usize, &tol)?;
            match format {
                TableFormat::Csv => {
                    let mut csv = String::from("g,predicted_purity,measured_purity\n");
                    for row in &rows {
                        csv.push_str(&format!(
                            "{},{},{}\n",
                            row.g, row.predicted_purity, row.measured_purity
                        ));
                    }
                    emit_text(&out, csv)
                }
                TableFormat::Json => emit_json(
                    &out,
                    envelope(&source, &psi, &write, &out, SweepBody { rows }),
                ),
            }
        }
        Command::Extract { input, write, out } => {
            let (psi, source) = resolve_input(&input)?;
            let body = extract_report(&psi, &write, &tol)?;
            emit_json(&out, envelope(&source, &psi, &write, &out, body))
        }
        Command::Evolve {
            input,
            write,
            hamiltonian,
            preset,
            j,
            hx,
            delta,
            h_seed,
            t_max,
            t_points,
            format,
            out,
        } => {
            let (psi, source) = resolve_input(&input)?;
            let h = match (hamiltonian, preset) {
                (Some(path), None) => load_hamiltonian(&path)
                    .with_context(|| format!("loading Hamiltonian {}", path.display()))?,
                (None, Some(PresetName::Ising)) => {
                    HamiltonianSpec::transverse_field_ising(psi.n_qubits(), j, hx)?
                }
                (None, Some(PresetName::Xxz)) => {
                    HamiltonianSpec::heisenberg_xxz(psi.n_qubits(), j, delta)?
                }
                (None, Some(PresetName::Random)) => {
                    HamiltonianSpec::random_two_local(psi.n_qubits(), h_seed)?
                }
                (None, None) => bail!("provide either --hamiltonian or --preset"),
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let rows = trajectory_rows(&psi, &write, &h, t_max, t_points as usize, &tol)?;
            match format {
                TableFormat::Csv => {
                    let mut header = String::from("t,fisher,purity,mean_weight");
                    for k in 0..=psi.n_qubits() {
                        header.push_str(&format!(",weight_{k}"));
                    }
                    header.push('\n');
                    let mut csv = header;
                    for row in &rows {
                        let mut line = format!(
                            "{},{},{},{}",
                            row.t, row.fisher, row.purity, row.mean_weight
                        );
                        for value in &row.weights {
                            line.push_str(&format!(",{value}"));
                        }
                        line.push('\n');
                        csv.push_str(&line);
                    }
                    emit_text(&out, csv)
                }
                TableFormat::Json => emit_json(
                    &out,
                    envelope(&source, &psi, &write, &out, TrajectoryBody { rows }),
                ),
            }
        }
        Command::Fisher { input, write, out } => {
            let (psi, source) = resolve_input(&input)?;
            let fisher = fisher_info(&psi, &write_op(&write)?)?;
            let body = FisherBody { fisher };
            emit_json(&out, envelope(&source, &psi, &write, &out, body))
        }
        Command::Verify { state, out } => {
            let psi =
                load_state(&state).with_context(|| format!("validating {}", state.display()))?;
            let body = VerifyBody {
                valid: true,
                dim: psi.dim(),
                norm_deviation: (psi.amps().norm() - 1.0).abs(),
            };
            let write = WriteArgs {
                theta: 0.0,
                axis: Axis([0.0, 0.0, 1.0]),
            };
            emit_json(
                &out,
                envelope(
                    &format!("verify {}", state.display()),
                    &psi,
                    &write,
                    &out,
                    body,
                ),
            )
        }
    }
}

fn resolve_input(input: &InputArgs) -> Result<(StateVector, String)> {
    if let Some(path) = &input.source.state {
        let psi = load_state(path).with_context(|| format!("loading state {}", path.display()))?;
        return Ok((psi, format!("state file {}", path.display())));
    }
    if let Some(name) = input.source.demo {
        return Ok(match name {
            DemoName::Bell => (StateVector::bell(), "bell".into()),
            DemoName::Ghz => (StateVector::ghz(), "ghz".into()),
            DemoName::Haar => (haar_random_state(input.qubits, 1), "haar seed=1".into()),
        });
    }
    if let Some(seed) = input.source.haar {
        if input.qubits == 0 {
            bail!("--qubits must be at least 1");
        }
        return Ok((
            haar_random_state(input.qubits, seed),
            format!("haar seed={seed}"),
        ));
    }
    unreachable!("clap enforces one input source")
}

fn write_op(write: &WriteArgs) -> Result<WriteOp> {
    Ok(WriteOp::new(write.theta, write.axis.0, 0)?)
}

fn envelope<T: serde::Serialize>(
    source: &str,
    psi: &StateVector,
    write: &WriteArgs,
    out: &OutputArgs,
    body: T,
) -> Envelope<T> {
    let timestamp_unix = if out.no_timestamp {
        None
    } else {
        Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    };
    Envelope {
        command: source.to_string(),
        timestamp_unix,
        tolerances: Tolerances::default(),
        input: InputDesc {
            source: source.to_string(),
            n_qubits: psi.n_qubits(),
            theta: write.theta,
            axis: write.axis.0,
        },
        body,
    }
}

fn capsule_report(psi: &StateVector, write: &WriteArgs, tol: &Tolerances) -> Result<CapsuleReport> {
    let axis = write.axis.0;
    let qic = find_qic(psi, axis, tol)?;
    let criteria = check_qic_criteria(psi, axis, &qic, tol)?;
    let fisher = fisher_info(psi, &write_op(write)?)?;
    Ok(build_capsule_body(&qic, criteria, fisher))
}

fn build_capsule_body(
    qic: &Qic,
    criteria: qic_core::qic::QicCriteria,
    fisher: qic_core::info::FisherReport,
) -> CapsuleReport {
    let capsule_bloch = qic_core::info::written_qubit_bloch(&qic.capsule_state, 0.0);
    CapsuleReport {
        schmidt_probs: qic.schmidt_probs,
        purity_curve: qic.params.as_ref().map(|p| p.curve),
        coupling_g: qic.params.as_ref().map(|p| p.g),
        factorization_residual_weight: qic.residual_weight,
        capsule_bloch,
        criteria,
        fisher,
        operators: VirtualQubitFile::from(&qic.qubit),
    }
}

fn bell_demo(w: &WriteOp, tol: &Tolerances) -> Result<BellDemoReport> {
    let bell = StateVector::bell();
    let fisher = fisher_info(&bell, w)?;

    let mut delocalization_residual: f64 = 0.0;
    let half = qic_core::linalg::CMat::identity(2).scaled(Complex64::new(0.5, 0.0));
    for theta in theta_grid() {
        let written = apply_write(&bell, &w.at(theta))?;
        let rho = reduced_density(&written, &[0])?;
        delocalization_residual = delocalization_residual.max(rho.max_abs_diff(&half));
    }

    let write = WriteArgs {
        theta: w.theta(),
        axis: Axis(w.axis()),
    };
    let capsule = capsule_report(&bell, &write, tol)?;

    let written = apply_write(&bell, w)?;
    let max_entanglement = match max_entangled_partner(&written, tol)? {
        MaxEntanglement::Pair(pair) => {
            let purity_a = corr_state_single(&written, &pair.qubit_a).purity;
            MaxEntanglementReport {
                possible: true,
                generator_expectation: 0.0,
                purity_a: Some(purity_a),
                purity_b: Some(pair.entanglement_purity),
                min_achievable_purity: None,
            }
        }
        MaxEntanglement::NotPossible {
            generator_expectation,
            min_purity,
        } => MaxEntanglementReport {
            possible: false,
            generator_expectation,
            purity_a: None,
            purity_b: None,
            min_achievable_purity: Some(min_purity),
        },
    };

    Ok(BellDemoReport {
        fisher,
        delocalization_residual,
        capsule,
        max_entanglement,
    })
}

fn ghz_demo(w: &WriteOp, tol: &Tolerances) -> Result<GhzDemoReport> {
    let fixture = ghz_fixture(tol)?;
    let fisher = fisher_info(&fixture.state, w)?;

    // Deviation of U·(written state) from w(θ)|+⟩ ⊗ (|++⟩+|−−⟩)/√2.
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVec::new(vec![Complex64::new(inv, 0.0), Complex64::new(inv, 0.0)]);
    let minus = CVec::new(vec![Complex64::new(inv, 0.0), Complex64::new(-inv, 0.0)]);
    let rest = plus
        .tensor(&plus)
        .add(&minus.tensor(&minus))
        .scaled(Complex64::new(inv, 0.0));
    let written = apply_write(&fixture.state, w)?;
    let mapped = written.apply_matrix(&fixture.factorizing_unitary);
    let expected = w.matrix().matvec(&plus).tensor(&rest);
    let factorization_residual = mapped.amps().max_abs_diff(&expected);

    let chi = CVec::basis(2, 0);
    let point = |triple| -> Result<ExtractPoint> {
        let e = extract(&fixture.state, w, triple, &chi, tol)?;
        Ok(ExtractPoint {
            theta: w.theta(),
            readout_bloch: e.readout_bloch,
            readout_purity: e.readout_purity,
            residual_fisher: e.residual_fisher,
            remainder_fisher: e.remainder_fisher,
        })
    };
    let extraction_1 = point(&fixture.qic1)?;
    let extraction_2 = point(&fixture.qic2)?;
    let equiv = check_equivalence(&fixture.qic1, &fixture.qic2, tol);

    Ok(GhzDemoReport {
        fisher,
        factorization_residual,
        capsule_1: VirtualQubitFile::from(&fixture.qic1),
        capsule_2: VirtualQubitFile::from(&fixture.qic2),
        extraction_1,
        extraction_2,
        capsules_equivalent: equiv.equivalent,
        inequivalence_residual: equiv.residual,
    })
}

fn sweep_rows(
    psi: &StateVector,
    write: &WriteArgs,
    g_points: usize,
    tol: &Tolerances,
) -> Result<Vec<SweepRow>> {
    let w = write_op(write)?;
    let written = apply_write(psi, &w)?;
    let s = schmidt_first_qubit(&written, tol);
    let curve = purity_curve_params(&s)
        .map_err(|e| anyhow!("coupling sweep needs an entangled state: {e}"))?;
    let tilde = tilde_ops(&s, psi.n_qubits(), tol)?;

    let mut rows = Vec::with_capacity(g_points);
    for k in 0..g_points {
        let g = k as f64 * std::f64::consts::PI / g_points as f64;
        let u = disentangler(&s, g)?;
        let moved = written.apply_matrix(&u);
        rows.push(SweepRow {
            g,
            predicted_purity: curve.predicted_purity(g),
            measured_purity: corr_state_single(&moved, &tilde).purity,
        });
    }
    Ok(rows)
}

fn extract_report(psi: &StateVector, write: &WriteArgs, tol: &Tolerances) -> Result<ExtractReport> {
    let axis = write.axis.0;
    let qic = find_qic(psi, axis, tol)?;
    let chi = CVec::basis(2, 0);
    let mut points = Vec::new();
    let mut all_ok = true;
    for theta in theta_grid() {
        let w = WriteOp::new(theta, axis, 0)?;
        let e = extract(psi, &w, &qic.qubit, &chi, tol)?;
        all_ok &= e.capsule_ok;
        points.push(ExtractPoint {
            theta,
            readout_bloch: e.readout_bloch,
            readout_purity: e.readout_purity,
            residual_fisher: e.residual_fisher,
            remainder_fisher: e.remainder_fisher,
        });
    }
    Ok(ExtractReport {
        probe_state: [[1.0, 0.0], [0.0, 0.0]],
        all_capsule_ok: all_ok,
        points,
    })
}

fn trajectory_rows(
    psi: &StateVector,
    write: &WriteArgs,
    h: &HamiltonianSpec,
    t_max: f64,
    t_points: usize,
    tol: &Tolerances,
) -> Result<Vec<TrajectoryRow>> {
    let axis = write.axis.0;
    let w = write_op(write)?;
    let qic = find_qic(psi, axis, tol)?;
    let times: Vec<f64> = (0..t_points)
        .map(|k| t_max * k as f64 / (t_points - 1) as f64)
        .collect();
    let fishers = fisher_conservation(psi, &w, h, &times, tol)?;
    let propagator = Propagator::new(h, tol)?;

    let mut rows = Vec::with_capacity(t_points);
    for (t, fisher) in times.iter().zip(&fishers) {
        let evolved = evolve_qic(&qic.qubit, h, *t, tol)?;
        let family = |theta: f64| -> qic_core::Result<StateVector> {
            let written = apply_write(psi, &w.at(theta))?;
            Ok(propagator.evolve(&written, *t))
        };
        let confinement =
            confinement_over_grid(family, &evolved.evolved, &qic.capsule_state, &theta_grid())?;
        rows.push(TrajectoryRow {
            t: *t,
            fisher: *fisher,
            purity: confinement.min_purity,
            mean_weight: mean_weight(&evolved.weight_profile),
            weights: evolved.weight_profile,
        });
    }
    Ok(rows)
}

fn emit_json<T: serde::Serialize>(out: &OutputArgs, envelope: Envelope<T>) -> Result<()> {
    let text = serde_json::to_string_pretty(&envelope)?;
    emit_text(out, text)
}

fn emit_text(out: &OutputArgs, mut text: String) -> Result<()> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}
