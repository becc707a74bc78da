use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use holo_core::chft::{
    amplitude_estimate, regularized_convergence, shapes, windowed_reconstruct, BoxFilter, ContinuousPhase,
    RegularizationIndex, SampledFunction,
};
use holo_core::holographic::{
    self, decode_hologram, encode_hologram, generate_phase, Hologram, PhaseProvenance, Span, WindowSpec,
};
use holo_core::progressive::{decode_packet, encode_packet, partition, simulate_channel, ChannelConfig, ReceiverState};
use holo_core::statistics::{
    lemma1_empirical_moments, quality_metrics, trial_seed, windowed_energy_experiment, QualityMetrics, WeightVector,
};
use holo_core::{identities, ComplexArray, Shape};

use crate::error::{CliError, CliResult};
use crate::io;
use crate::report;
use crate::{Cli, Command, TestFunction, WindowArgs};

pub fn run(cli: &Cli) -> CliResult<()> {
    let seed = cli.seed;
    let report = match &cli.command {
        Command::Encode {
            input,
            output,
            embed_phase,
        } => encode(input, output, *embed_phase, seed)?,
        Command::Recover { input, output, window } => {
            if input.is_dir() {
                recover_packets(input, output, window)?
            } else {
                recover(input, output, window)?
            }
        }
        Command::CropRecover { input, output, window } => crop_recover(input, output.as_deref(), window, seed)?,
        Command::Stats {
            size,
            window_start,
            window_len,
            trials,
            amplitude,
            unit_weights,
        } => stats(
            *size,
            *window_start,
            *window_len,
            *trials,
            *amplitude,
            *unit_weights,
            seed,
        )?,
        Command::ChftDemo {
            function,
            size,
            reg_n,
            phase_spacing,
            cutoff_k,
            trials,
        } => chft_demo(*function, *size, reg_n, *phase_spacing, *cutoff_k, *trials, seed)?,
        Command::ProgressiveSim {
            input,
            size,
            packets,
            loss_rate,
            reorder,
            channel_seed,
            output,
            packet_dir,
        } => progressive_sim(
            input.as_deref(),
            *size,
            *packets,
            ChannelConfig::new(*loss_rate, *reorder, channel_seed.unwrap_or(seed))?,
            output.as_deref(),
            packet_dir.as_deref(),
            seed,
        )?,
        Command::IdentitySuite => {
            let (report, failed) = identity_suite(seed)?;
            emit(cli, &report)?;
            return match failed {
                0 => Ok(()),
                n => Err(CliError::ChecksFailed(format!("{n} identity checks failed"))),
            };
        }
    };
    emit(cli, &report)
}

fn emit(cli: &Cli, report: &Value) -> CliResult<()> {
    let text = report::render(report, cli.format);
    if let Some(path) = &cli.report {
        io::write_atomic(path, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

impl WindowArgs {
    fn is_empty(&self) -> bool {
        self.window_start.is_none()
            && self.window_len.is_none()
            && self.window_col_start.is_none()
            && self.window_col_len.is_none()
    }

    /// Missing starts default to 0, missing lengths to the rest of the axis.
    fn resolve(&self, shape: Shape) -> CliResult<WindowSpec> {
        let span = |start: Option<usize>, len: Option<usize>, m: usize| {
            let start = start.unwrap_or(0);
            Span::new(start, len.unwrap_or(m.saturating_sub(start)))
        };
        let window = match shape {
            Shape::D1(m) => {
                if self.window_col_start.is_some() || self.window_col_len.is_some() {
                    return Err(CliError::usage("column window flags apply only to 2D inputs"));
                }
                WindowSpec::D1(span(self.window_start, self.window_len, m))
            }
            Shape::D2 { rows, cols } => WindowSpec::D2 {
                rows: span(self.window_start, self.window_len, rows),
                cols: span(self.window_col_start, self.window_col_len, cols),
            },
        };
        window.validate(shape)?;
        Ok(window)
    }
}

fn window_json(window: &WindowSpec) -> Value {
    window
        .spans()
        .iter()
        .map(|s| json!({"start": s.start, "len": s.len}))
        .collect()
}

fn path_json(path: Option<&Path>) -> Value {
    path.map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn encode(input: &Path, output: &Path, embed_phase: bool, seed: u64) -> CliResult<Value> {
    let signal = io::load_input(input)?;
    let phase = generate_phase(seed, signal.shape())?;
    let mut h = holographic::encode(&signal, &phase)?;
    if embed_phase {
        h = h.embed_phase()?;
    }
    let bytes = encode_hologram(&h)?;
    io::write_atomic(output, &bytes)?;
    Ok(json!({
        "command": "encode",
        "input": input.display().to_string(),
        "output": output.display().to_string(),
        "shape": signal.shape().dims(),
        "seed": seed,
        "phase_storage": if embed_phase { "embedded" } else { "seed" },
        "signal_energy": signal.energy(),
        "hologram_energy": h.data().energy(),
        "bytes": bytes.len(),
    }))
}

fn load_hologram(path: &Path) -> CliResult<Hologram> {
    decode_hologram(&io::read_bytes(path)?).map_err(|e| CliError::in_file(path, e))
}

fn recover(input: &Path, output: &Path, window: &WindowArgs) -> CliResult<Value> {
    let h = load_hologram(input)?;
    let shape = h.shape();
    let window = window.resolve(shape)?;
    let (m, len) = (shape.len(), window.size());
    let recovered = holographic::recover_windowed_zero_extended(&h, &window)?;
    let amplitudes = holographic::rescale_amplitude(&recovered, len, m)?.amplitudes();
    io::save_amplitudes(output, shape, &amplitudes)?;
    let phase_seed = match h.provenance() {
        PhaseProvenance::Seed(s) => Some(*s),
        PhaseProvenance::Embedded(_) => None,
    };
    Ok(json!({
        "command": "recover",
        "source": "hologram",
        "input": input.display().to_string(),
        "output": output.display().to_string(),
        "shape": shape.dims(),
        "phase_seed": phase_seed,
        "window": window_json(&window),
        "window_size": len,
        "coverage": len as f64 / m as f64,
        "rescale_factor": (m as f64 / len as f64).sqrt(),
    }))
}

fn recover_packets(dir: &Path, output: &Path, window: &WindowArgs) -> CliResult<Value> {
    if !window.is_empty() {
        return Err(CliError::usage("window flags do not apply to packet directories"));
    }
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| CliError::io(dir, e)))
        .collect::<CliResult<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "hpkt"));
    paths.sort();
    let mut state: Option<ReceiverState> = None;
    for path in &paths {
        let packet = decode_packet(&io::read_bytes(path)?).map_err(|e| CliError::in_file(path, e))?;
        let receiver = match state.as_mut() {
            Some(s) => s,
            None => state.insert(ReceiverState::new(packet.source_shape, packet.total_packets)?),
        };
        receiver.accumulate(packet).map_err(|e| CliError::in_file(path, e))?;
    }
    let Some(state) = state else {
        return Err(CliError::usage(format!("{}: no .hpkt packets found", dir.display())));
    };
    let out = state.render()?;
    io::save_amplitudes(output, state.source_shape(), &out.amplitude)?;
    Ok(json!({
        "command": "recover",
        "source": "packets",
        "input": dir.display().to_string(),
        "output": output.display().to_string(),
        "shape": state.source_shape().dims(),
        "packets_received": state.len(),
        "packets_expected": state.expected_total(),
        "packet_ids": state.received_ids().collect::<Vec<_>>(),
        "received_samples": out.received_samples,
        "coverage": out.coverage,
        "rescale_factor": (state.source_shape().len() as f64 / out.received_samples as f64).sqrt(),
    }))
}

fn crop_recover(input: &Path, output: Option<&Path>, window: &WindowArgs, seed: u64) -> CliResult<Value> {
    let signal = io::load_input(input)?;
    let shape = signal.shape();
    let window = window.resolve(shape)?;
    let (m, len) = (shape.len(), window.size());
    let h = holographic::encode(&signal, &generate_phase(seed, shape)?)?;
    let recovered = holographic::recover_windowed_zero_extended(&h, &window)?;
    let rescaled = holographic::rescale_amplitude(&recovered, len, m)?.amplitudes();
    // images are scored as written: on the 8-bit grid
    let quantized = matches!(shape, Shape::D2 { .. });
    let amplitudes: Vec<f64> = if quantized {
        rescaled.iter().map(|&a| io::quantize(a) as f64 / 255.0).collect()
    } else {
        rescaled
    };
    let quality = quality_metrics(&signal.amplitudes(), &amplitudes)?;
    if let Some(path) = output {
        io::save_amplitudes(path, shape, &amplitudes)?;
    }
    Ok(json!({
        "command": "crop-recover",
        "input": input.display().to_string(),
        "output": path_json(output),
        "shape": shape.dims(),
        "seed": seed,
        "window": window_json(&window),
        "window_size": len,
        "coverage": len as f64 / m as f64,
        "expected_energy_ratio": len as f64 / m as f64,
        "measured_energy_ratio": recovered.energy() / signal.energy(),
        "rescale_factor": (m as f64 / len as f64).sqrt(),
        "quantized": quantized,
        "quality": to_value(quality),
    }))
}

fn stats(
    size: usize,
    window_start: usize,
    window_len: usize,
    trials: usize,
    amplitude: f64,
    unit_weights: bool,
    seed: u64,
) -> CliResult<Value> {
    let (mode, report) = if unit_weights {
        let phi = WeightVector::new(vec![1.0; size])?;
        ("unit-weights", lemma1_empirical_moments(&phi, trials, seed)?)
    } else {
        let report = windowed_energy_experiment(size, window_len, window_start, amplitude, trials, seed)?;
        ("windowed-energy", report)
    };
    let mut value = json!({
        "command": "stats",
        "mode": mode,
        "size": size,
        "trials": trials,
        "base_seed": seed,
        "relative_error": report.relative_error(),
        "mean_magnitude": report.empirical_mean().norm(),
        "moments": to_value(&report),
    });
    if !unit_weights {
        value["window_start"] = json!(window_start);
        value["window_len"] = json!(window_len);
        value["amplitude"] = json!(amplitude);
    }
    Ok(value)
}

#[derive(Serialize)]
struct BoxPoint {
    x: f64,
    f: f64,
    predicted_energy: f64,
    empirical_energy: f64,
}

fn chft_demo(
    function: TestFunction,
    size: usize,
    reg_n: &[f64],
    phase_spacing: f64,
    cutoff_k: Option<f64>,
    trials: usize,
    seed: u64,
) -> CliResult<Value> {
    let (name, f, half_width): (&str, fn(f64) -> f64, f64) = match function {
        TestFunction::RaisedCosine => ("raised-cosine", shapes::raised_cosine, 1.0),
        TestFunction::Gaussian => ("gaussian", shapes::gaussian, 4.0),
        TestFunction::Box => ("box", shapes::unit_box, 1.0),
    };
    let sampled = SampledFunction::from_real_fn(-half_width, half_width, size, f)?;
    let phase = ContinuousPhase::new(seed, -half_width, half_width, phase_spacing)?.sample(&sampled)?;
    let indices = reg_n
        .iter()
        .map(|&n| RegularizationIndex::new(n))
        .collect::<Result<Vec<_>, _>>()?;
    let errors = regularized_convergence(&sampled, &phase, &indices)?;
    let convergence: Vec<Value> = reg_n
        .iter()
        .zip(&errors)
        .map(|(n, e)| json!({"n": n, "sup_error": e}))
        .collect();

    let box_filter = match cutoff_k {
        None => Value::Null,
        Some(k) => {
            if trials == 0 {
                return Err(CliError::usage("--trials must be positive"));
            }
            let w = BoxFilter::new(k)?;
            let count = 9;
            let width = 2.0 * half_width;
            let xs: Vec<f64> = (0..count)
                .map(|i| -half_width + (i as f64 + 0.5) * width / count as f64)
                .collect();
            let mut empirical = vec![0.0; count];
            for t in 0..trials {
                let iid = generate_phase(trial_seed(seed, t), Shape::D1(size))?;
                for (acc, g) in empirical.iter_mut().zip(windowed_reconstruct(&sampled, &iid, w, &xs)?) {
                    *acc += g.norm_sqr() / trials as f64;
                }
            }
            let points = xs
                .iter()
                .zip(empirical)
                .map(|(&x, empirical_energy)| {
                    Ok(BoxPoint {
                        x,
                        f: f(x),
                        predicted_energy: amplitude_estimate(&sampled, w, x)?.powi(2),
                        empirical_energy,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            json!({"cutoff_k": k, "trials": trials, "points": to_value(points)})
        }
    };

    Ok(json!({
        "command": "chft-demo",
        "function": name,
        "size": size,
        "interval": [-half_width, half_width],
        "step": sampled.step(),
        "seed": seed,
        "phase_spacing": phase_spacing,
        "convergence": convergence,
        "strictly_decreasing": errors.windows(2).all(|w| w[1] < w[0]),
        "box_filter": box_filter,
    }))
}

#[derive(Serialize)]
struct Step {
    packet_id: u32,
    coverage: f64,
    quality: QualityMetrics,
}

fn progressive_sim(
    input: Option<&Path>,
    size: usize,
    num_packets: usize,
    channel: ChannelConfig,
    output: Option<&Path>,
    packet_dir: Option<&Path>,
    seed: u64,
) -> CliResult<Value> {
    let signal = match input {
        Some(path) => io::load_input(path)?,
        None => {
            if size == 0 {
                return Err(CliError::usage("--size must be positive"));
            }
            ComplexArray::from_real(Shape::D1(size), &vec![1.0; size])?
        }
    };
    let shape = signal.shape();
    let reference = signal.amplitudes();
    let h = holographic::encode(&signal, &generate_phase(seed, shape)?)?;
    let packets = partition(&h, num_packets)?;
    let wire = packets
        .iter()
        .map(|p| Ok((p.packet_id, encode_packet(p)?)))
        .collect::<CliResult<Vec<_>>>()?;

    let delivered = simulate_channel(wire, &channel);
    let arrival: Vec<u32> = delivered.iter().map(|(id, _)| *id).collect();
    let lost: Vec<u32> = (0..num_packets as u32).filter(|id| !arrival.contains(id)).collect();

    if let Some(dir) = packet_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (id, bytes) in &delivered {
            io::write_atomic(&dir.join(format!("packet_{id:04}.hpkt")), bytes)?;
        }
    }

    let mut state = ReceiverState::new(shape, num_packets as u32)?;
    let mut steps = Vec::new();
    let mut last = None;
    for (id, bytes) in &delivered {
        state.accumulate(decode_packet(bytes)?)?;
        let out = state.render()?;
        steps.push(Step {
            packet_id: *id,
            coverage: out.coverage,
            quality: quality_metrics(&reference, &out.amplitude)?,
        });
        last = Some(out);
    }
    let written = match (output, &last) {
        (Some(path), Some(out)) => {
            io::save_amplitudes(path, shape, &out.amplitude)?;
            Some(path)
        }
        (Some(path), None) => {
            eprintln!("holo: no packets delivered, {} not written", path.display());
            None
        }
        _ => None,
    };

    Ok(json!({
        "command": "progressive-sim",
        "input": path_json(input),
        "shape": shape.dims(),
        "seed": seed,
        "channel_seed": channel.seed(),
        "loss_rate": channel.loss_rate(),
        "reorder": channel.reorder(),
        "packets": num_packets,
        "delivered": arrival.len(),
        "arrival_order": arrival,
        "lost": lost,
        "steps": to_value(steps),
        "final_coverage": last.as_ref().map_or(0.0, |o| o.coverage),
        "output": path_json(written),
        "packet_dir": path_json(packet_dir),
    }))
}

fn identity_suite(seed: u64) -> CliResult<(Value, usize)> {
    let checks = identities::run_suite(seed)?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    eprintln!("{:<width$}  {:>10}  {:>10}  result", "check", "max error", "tolerance");
    for c in &checks {
        eprintln!(
            "{:<width$}  {:>10.3e}  {:>10.1e}  {}",
            c.name,
            c.max_error,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let report = json!({
        "command": "identity-suite",
        "seed": seed,
        "checks": to_value(&checks),
        "passed": failed == 0,
        "failed": failed,
    });
    Ok((report, failed))
}
