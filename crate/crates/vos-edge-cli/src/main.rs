//! `vos-edge`: detect color edges, generate synthetic test patterns, and
//! evaluate edge maps against ground truth.
//!
//! Exit codes: 0 on success, 1 on runtime failure (I/O, decode), 2 on
//! usage errors.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vos_edge::pipeline::{
    apply_threshold, compute_response_map_with_schemes, non_max_suppression, resolve_threshold,
};
use vos_edge::{
    build_default_schemes, connected_components, endpoint_count, generate_disk_image,
    generate_step_image, load_edge_map, load_image, parse_schemes, pratt_fom, salt_pepper,
    save_edge_map, save_image, save_response_map, BorderPolicy, ColorPixel, Operator,
    PipelineConfig, StepOrientation, ThresholdMode, MAX_DISTANCE, PRATT_ALPHA,
};

#[derive(Parser)]
#[command(
    name = "vos-edge",
    version,
    about = "Color edge detection in RGB space using vector order statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect edges in a color image and write a binary edge map.
    Detect(DetectArgs),
    /// Generate a synthetic test image with ground-truth edges.
    Synth(SynthArgs),
    /// Score a detected edge map against a ground-truth edge map.
    Eval(EvalArgs),
}

#[derive(Args)]
struct DetectArgs {
    /// Input image (PNG, PPM P3/P6, or PGM P5).
    #[arg(long)]
    input: PathBuf,
    /// Output edge map (.png or .pgm).
    #[arg(long)]
    output: PathBuf,
    /// Edge-strength operator.
    #[arg(long, default_value = "mvr", value_parser = parse_operator)]
    operator: Operator,
    /// Rank depth for mvr/mvd.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=8))]
    k: u8,
    /// Fixed threshold on the operator response.
    #[arg(long, value_parser = parse_fixed_threshold, conflicts_with_all = ["otsu", "percentile"])]
    threshold: Option<f64>,
    /// Pick the threshold by Otsu's method (the default).
    #[arg(long, conflicts_with = "percentile")]
    otsu: bool,
    /// Set the threshold to this percentile of the nonzero responses.
    #[arg(long, value_parser = parse_percentile)]
    percentile: Option<f64>,
    /// Skip non-maximum suppression.
    #[arg(long)]
    no_nms: bool,
    /// Border policy for windows at the image edge.
    #[arg(long, default_value = "replicate", value_parser = parse_border)]
    border: BorderPolicy,
    /// Load collection schemes from a config file instead of the built-ins.
    #[arg(long)]
    schemes: Option<PathBuf>,
    /// Also write the response map the threshold is applied to, i.e. after
    /// NMS unless --no-nms (.png for 16-bit, .csv for exact values).
    #[arg(long)]
    response_out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Test pattern to generate.
    #[arg(long, value_parser = ["step", "disk"])]
    pattern: String,
    /// Pattern width (step).
    #[arg(long, default_value_t = 64)]
    width: u32,
    /// Pattern height (step).
    #[arg(long, default_value_t = 64)]
    height: u32,
    /// Image size (disk; the image is square).
    #[arg(long, default_value_t = 64)]
    size: u32,
    /// Disk radius in pixels.
    #[arg(long, default_value_t = 20)]
    radius: u32,
    /// First color as R,G,B.
    #[arg(long, default_value = "255,0,0", value_parser = parse_color)]
    color_a: ColorPixel,
    /// Second color as R,G,B.
    #[arg(long, default_value = "0,0,255", value_parser = parse_color)]
    color_b: ColorPixel,
    /// Step boundary orientation.
    #[arg(long, default_value = "vertical", value_parser = parse_orientation)]
    orientation: StepOrientation,
    /// Salt-and-pepper noise rate in [0, 1].
    #[arg(long, default_value_t = 0.0, value_parser = parse_noise_rate)]
    noise: f64,
    /// Seed for the noise generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output image (.png or .ppm).
    #[arg(long)]
    out: PathBuf,
    /// Output ground-truth edge map (.png or .pgm).
    #[arg(long)]
    truth_out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Detected edge map.
    #[arg(long)]
    detected: PathBuf,
    /// Ground-truth edge map.
    #[arg(long)]
    truth: PathBuf,
    /// Which metrics to print.
    #[arg(long, default_value = "all", value_parser = ["fom", "endpoints", "components", "all"])]
    metric: String,
}

fn parse_operator(s: &str) -> Result<Operator, String> {
    s.parse()
}

fn parse_border(s: &str) -> Result<BorderPolicy, String> {
    s.parse()
}

fn parse_orientation(s: &str) -> Result<StepOrientation, String> {
    s.parse()
}

fn parse_fixed_threshold(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if !value.is_finite() || !(0.0..=MAX_DISTANCE).contains(&value) {
        return Err(format!("threshold must lie in [0, {MAX_DISTANCE}]"));
    }
    Ok(value)
}

fn parse_percentile(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if !value.is_finite() || value <= 0.0 || value >= 100.0 {
        return Err("percentile must lie strictly between 0 and 100".into());
    }
    Ok(value)
}

fn parse_noise_rate(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err("noise rate must lie in [0, 1]".into());
    }
    Ok(value)
}

fn parse_color(s: &str) -> Result<ColorPixel, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected R,G,B with three components, got {s:?}"));
    }
    let mut channels = [0u8; 3];
    for (slot, part) in channels.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid channel value {:?}", part.trim()))?;
    }
    Ok(ColorPixel::from_u8(channels[0], channels[1], channels[2]))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(args) => run_detect(args),
        Command::Synth(args) => run_synth(args),
        Command::Eval(args) => run_eval(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run_detect(args: DetectArgs) -> Result<(), String> {
    let threshold = match (args.threshold, args.percentile) {
        (Some(t), _) => ThresholdMode::Fixed(t),
        (None, Some(p)) => ThresholdMode::Percentile(p),
        (None, None) => ThresholdMode::Otsu,
    };
    let config = PipelineConfig {
        operator: args.operator,
        k: usize::from(args.k),
        threshold,
        nms: !args.no_nms,
        border: args.border,
    };
    let image = load_image(&args.input).map_err(|e| e.to_string())?;
    let schemes = match &args.schemes {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read schemes file {}: {e}", path.display()))?;
            parse_schemes(&text).map_err(|e| format!("schemes file {}: {e}", path.display()))?
        }
        None => build_default_schemes(),
    };

    let map =
        compute_response_map_with_schemes(&image, &config, &schemes).map_err(|e| e.to_string())?;
    let map = if config.nms {
        non_max_suppression(&map)
    } else {
        map
    };
    if let Some(path) = &args.response_out {
        save_response_map(&map, path).map_err(|e| e.to_string())?;
    }
    let t = resolve_threshold(&map, &config.threshold);
    println!("threshold={t:.6}");
    let edges = apply_threshold(&map, t);
    save_edge_map(&edges, &args.output).map_err(|e| e.to_string())
}

fn run_synth(args: SynthArgs) -> Result<(), String> {
    let (image, truth) = match args.pattern.as_str() {
        "step" => generate_step_image(
            args.width,
            args.height,
            args.color_a,
            args.color_b,
            args.orientation,
        )
        .map_err(|e| e.to_string())?,
        "disk" => generate_disk_image(args.size, args.radius, args.color_a, args.color_b)
            .map_err(|e| e.to_string())?,
        other => return Err(format!("unknown pattern {other:?}")),
    };
    let image = if args.noise > 0.0 {
        salt_pepper(&image, args.noise, args.seed).map_err(|e| e.to_string())?
    } else {
        image
    };
    save_image(&image, &args.out).map_err(|e| e.to_string())?;
    save_edge_map(truth.edge_map(), &args.truth_out).map_err(|e| e.to_string())
}

fn run_eval(args: EvalArgs) -> Result<(), String> {
    let detected = load_edge_map(&args.detected).map_err(|e| e.to_string())?;
    let truth = load_edge_map(&args.truth).map_err(|e| e.to_string())?;
    let metric = args.metric.as_str();
    if metric == "fom" || metric == "all" {
        let fom = pratt_fom(&detected, &truth, PRATT_ALPHA).map_err(|e| e.to_string())?;
        println!("fom={fom:.6}");
    }
    if metric == "endpoints" || metric == "all" {
        println!("endpoints={:.6}", endpoint_count(&detected) as f64);
    }
    if metric == "components" || metric == "all" {
        println!("components={:.6}", connected_components(&detected) as f64);
    }
    Ok(())
}
