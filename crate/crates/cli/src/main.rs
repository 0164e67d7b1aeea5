use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gaitcap_core::gait::{ankle_displacement, compute_gait_report, detect_foot_events, write_ankle_csv};
use gaitcap_core::imaging::io::{list_frames, read_gray, read_silhouette, write_gray, write_silhouette};
use gaitcap_core::imaging::{extract_silhouette, render_silhouette, GrayFrame};
use gaitcap_core::ipf::{track, FrameLog, Scene};
use gaitcap_core::kinematics::BodyFile;
use gaitcap_core::likelihood::{combine_cameras, pixel_counts, weight};
use gaitcap_core::testbed::{evaluate, generate_walk, WalkScenario};
use gaitcap_core::{PixelCounts, RunConfig, Trajectory};

/// Markerless gait capture from silhouette sequences.
#[derive(Parser)]
#[command(name = "gaitcap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic walk: frames, background and ground truth.
    Synth(Common),
    /// Track the configured frame directories.
    Track(Common),
    /// Gait parameters from the tracked trajectory.
    Gait(TrajectoryArgs),
    /// Per-frame longitudinal ankle displacement for plotting.
    PlotData(TrajectoryArgs),
    /// Compare the tracked trajectory with ground truth.
    Eval(EvalArgs),
    /// Pixel counts and weight of one trajectory pose against its frame.
    DebugWeight(DebugArgs),
    /// Print the built-in body description as TOML.
    Skeleton(Common),
    /// Print the fully populated configuration as TOML.
    Config(Common),
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the tracker noise and the synthetic pixel noise.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of frames to generate (synth) or to read (track).
    #[arg(long)]
    frames: Option<usize>,
    /// Output directory.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    common: Common,
    /// Trajectory CSV; `<output>/trajectory.csv` by default.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Ground-truth CSV; `<output>/truth.csv` by default.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct DebugArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Frame index to inspect.
    #[arg(long, default_value_t = 0)]
    frame: usize,
    /// Observed silhouette mask; with `--model`, compares the two files
    /// directly instead of a trajectory pose.
    #[arg(long, requires = "model")]
    observed: Option<PathBuf>,
    /// Model silhouette mask.
    #[arg(long, requires = "observed")]
    model: Option<PathBuf>,
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => {
            let out = common.output.clone().unwrap_or_else(|| PathBuf::from("gaitcap-out"));
            RunConfig::with_paths(&out, out.join("frames"))
        }
    };
    if let Some(out) = &common.output {
        config.paths.output = out.clone();
    }
    if let Some(seed) = common.seed {
        config.ipf.rng_seed = seed;
        config.synth.seed = seed;
    }
    Ok(config)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn read_trajectory(path: &Path, frame_rate: f64) -> Result<Trajectory> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Trajectory::read_csv(file, frame_rate).with_context(|| format!("reading {}", path.display()))
}

fn synth(common: &Common) -> Result<()> {
    let mut config = load_config(common)?;
    if let Some(n) = common.frames {
        config.synth.frame_count = n;
    }
    let (skeleton, flesh) = config.body()?;
    let base = config.scenario()?;
    let mut truth = None;
    let views = config.cameras.iter().zip(&config.paths.frames).zip(&config.paths.backgrounds);
    for (c, ((camera, dir), bg_path)) in views.enumerate() {
        // distinct pixel noise per camera
        let scenario = WalkScenario {
            camera: camera.to_model()?,
            seed: base.seed.wrapping_add(c as u64),
            ..base.clone()
        };
        let walk = generate_walk(&scenario, &skeleton, &flesh).context("testbed: generating walk")?;
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (k, frame) in walk.frames.iter().enumerate() {
            write_gray(&dir.join(format!("frame_{k:04}.pgm")), frame)?;
        }
        write_gray(bg_path, &walk.background)?;
        eprintln!("wrote {} frames to {}", walk.frames.len(), dir.display());
        truth = Some(walk.truth);
    }
    let truth = truth.context("no cameras configured")?;
    let path = config.paths.output.join("truth.csv");
    truth.write_csv(create(&path)?)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run_track(common: &Common) -> Result<()> {
    let config = load_config(common)?;
    config.check_inputs()?;
    let (skeleton, flesh) = config.body()?;
    let ipf = config.tracker_config(&skeleton)?;
    let cameras = config.camera_models()?;

    let mut sequences: Vec<Vec<GrayFrame>> = Vec::new();
    for dir in &config.paths.frames {
        let mut files = list_frames(dir)?;
        if let Some(n) = common.frames {
            files.truncate(n);
        }
        if files.is_empty() {
            bail!("no numbered frames found in {}", dir.display());
        }
        sequences.push(files.iter().map(|p| read_gray(p)).collect::<gaitcap_core::Result<_>>()?);
    }
    let backgrounds: Vec<GrayFrame> = config.paths.backgrounds.iter().map(|p| read_gray(p)).collect::<gaitcap_core::Result<_>>()?;

    let out = &config.paths.output;
    let mut log = create(&out.join("track_log.csv"))?;
    writeln!(log, "frame,best_weight,population,wall_time_s")?;
    let scene = Scene { skeleton: &skeleton, flesh: &flesh, cameras: &cameras };
    let mut log_error = None;
    let trajectory = track(
        &sequences,
        &backgrounds,
        config.imaging.threshold,
        config.capture.frame_rate,
        &ipf,
        scene,
        |entry: &FrameLog| {
            eprintln!(
                "frame {:>4}  weight {:>10.4}  particles {:>6}  {:>8.3} s",
                entry.frame,
                entry.best_weight,
                entry.population,
                entry.wall_time.as_secs_f64()
            );
            if let Err(e) = writeln!(
                log,
                "{},{},{},{}",
                entry.frame,
                entry.best_weight,
                entry.population,
                entry.wall_time.as_secs_f64()
            ) {
                log_error.get_or_insert(e);
            }
        },
    )
    .context("ipf: tracking failed")?;
    if let Some(e) = log_error {
        return Err(e).context("writing track_log.csv");
    }
    log.flush()?;
    trajectory.write_csv(create(&out.join("trajectory.csv"))?)?;
    fs::write(out.join("trajectory.json"), trajectory.to_json()?)?;
    eprintln!("wrote {} frames to {}", trajectory.len(), out.join("trajectory.csv").display());
    Ok(())
}

fn gait(args: &TrajectoryArgs, plot_only: bool) -> Result<()> {
    let config = load_config(&args.common)?;
    let out = &config.paths.output;
    let path = args.trajectory.clone().unwrap_or_else(|| out.join("trajectory.csv"));
    let trajectory = read_trajectory(&path, config.capture.frame_rate)?;

    let ankles = ankle_displacement(&trajectory);
    let ankle_path = out.join("ankle_displacement.csv");
    write_ankle_csv(&ankles, create(&ankle_path)?)?;
    eprintln!("wrote {}", ankle_path.display());
    if plot_only {
        return Ok(());
    }

    let events = detect_foot_events(&trajectory, config.gait.velocity_threshold).context("gait: detecting foot events")?;
    let report = compute_gait_report(&trajectory, &events).context("gait: computing report")?;
    fs::write(out.join("gait_report.json"), serde_json::to_string_pretty(&report)?)?;
    report.write_csv(create(&out.join("gait_report.csv"))?)?;
    for (name, value) in report.rows() {
        println!("{name:<28} {value:.4}");
    }
    Ok(())
}

fn eval(args: &EvalArgs) -> Result<()> {
    let config = load_config(&args.common)?;
    let out = &config.paths.output;
    let rate = config.capture.frame_rate;
    let estimated = read_trajectory(&args.trajectory.clone().unwrap_or_else(|| out.join("trajectory.csv")), rate)?;
    let truth = read_trajectory(&args.truth.clone().unwrap_or_else(|| out.join("truth.csv")), rate)?;
    let report = evaluate(&estimated, &truth).context("testbed: evaluating trajectory")?;
    fs::write(out.join("eval_report.json"), serde_json::to_string_pretty(&report)?)?;
    report.write_csv(create(&out.join("eval_report.csv"))?)?;
    println!("mean joint RMSE {:.4} m over {} frames", report.mean_rmse, truth.len());
    Ok(())
}

fn print_counts(label: &str, counts: &PixelCounts) -> f64 {
    let w = weight(counts);
    println!(
        "{label}: n_common {}  n_sil_only {}  n_model_only {}  weight {w:.6}",
        counts.n_common, counts.n_sil_only, counts.n_model_only
    );
    w
}

fn debug_weight(args: &DebugArgs) -> Result<()> {
    if let (Some(observed), Some(model)) = (&args.observed, &args.model) {
        let counts = pixel_counts(&read_silhouette(observed)?, &read_silhouette(model)?)
            .context("likelihood: comparing masks")?;
        print_counts("masks", &counts);
        return Ok(());
    }
    let config = load_config(&args.common)?;
    config.check_inputs()?;
    let out = &config.paths.output;
    let (skeleton, flesh) = config.body()?;
    let trajectory = read_trajectory(
        &args.trajectory.clone().unwrap_or_else(|| out.join("trajectory.csv")),
        config.capture.frame_rate,
    )?;
    let entry = trajectory
        .entries()
        .get(args.frame)
        .with_context(|| format!("trajectory has {} frames, no frame {}", trajectory.len(), args.frame))?;
    let mut weights = Vec::new();
    for (c, ((camera, dir), bg)) in config
        .camera_models()?
        .iter()
        .zip(&config.paths.frames)
        .zip(&config.paths.backgrounds)
        .enumerate()
    {
        let files = list_frames(dir)?;
        let file = files.get(args.frame).with_context(|| format!("{} has no frame {}", dir.display(), args.frame))?;
        let observed = extract_silhouette(&read_gray(file)?, &read_gray(bg)?, config.imaging.threshold)?;
        let rendered = render_silhouette(&skeleton, &flesh, &entry.pose, camera)
            .with_context(|| format!("imaging: rendering frame {}", args.frame))?;
        let counts = pixel_counts(&observed, &rendered)?;
        let w = print_counts(&format!("camera {c}"), &counts);
        fs::create_dir_all(out)?;
        write_silhouette(&out.join(format!("debug_frame{:04}_cam{c}_observed.pgm", args.frame)), &observed)?;
        write_silhouette(&out.join(format!("debug_frame{:04}_cam{c}_model.pgm", args.frame)), &rendered)?;
        weights.push(w);
    }
    println!("combined weight {:.6}", combine_cameras(&weights)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(c) => synth(&c),
        Command::Track(c) => run_track(&c),
        Command::Gait(a) => gait(&a, false),
        Command::PlotData(a) => gait(&a, true),
        Command::Eval(a) => eval(&a),
        Command::DebugWeight(a) => debug_weight(&a),
        Command::Skeleton(c) => {
            let config = load_config(&c)?;
            let (skeleton, flesh) = config.body()?;
            print!("{}", BodyFile::from_body(&skeleton, &flesh).to_toml());
            Ok(())
        }
        Command::Config(c) => {
            print!("{}", load_config(&c)?.to_toml());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
