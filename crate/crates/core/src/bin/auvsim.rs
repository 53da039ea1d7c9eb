use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use auvsim::harness::{self, load_scenario, HarnessError, RunOptions, Scenario, UdpMirror};
use auvsim::selftest::run_selftest;

#[derive(Parser)]
#[command(name = "auvsim", version, about = "AUV software-in-the-loop simulator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario and write run.tlog, run.csv and report.json.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Override the scenario duration, seconds.
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Mirror controller telemetry to host:port (e.g. 127.0.0.1:14550).
        #[arg(long, value_name = "HOST:PORT", num_args = 0..=1,
              default_missing_value = harness::udp::DEFAULT_UDP_TARGET)]
        udp: Option<String>,
    },
    /// Decode a tlog into a CSV of message fields.
    Replay {
        #[arg(long)]
        tlog: PathBuf,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Check CRC vectors and the built-in golden frames.
    Selftest,
    /// Print the built-in default scenario as JSON.
    DefaultScenario,
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn run(
    scenario: PathBuf,
    seed: u64,
    duration: Option<f64>,
    out: PathBuf,
    udp: Option<String>,
) -> Result<(), HarnessError> {
    let text = fs::read_to_string(&scenario).map_err(|e| io_err(&scenario, e))?;
    let loaded = load_scenario(&text)?;
    for w in &loaded.warnings {
        eprintln!("warning: unknown key {w}");
    }
    let mut s = loaded.scenario;
    s.seed = seed;
    if let Some(d) = duration {
        s.duration = d;
    }
    let udp = match udp {
        Some(addr) => Some(UdpMirror::connect(addr.as_str()).map_err(|e| {
            HarnessError::validation("--udp", format!("{addr}: {e}"))
        })?),
        None => None,
    };
    let result = harness::run(s, RunOptions { udp })?;
    fs::create_dir_all(&out).map_err(|e| io_err(&out, e))?;
    let write = |name: &str, bytes: &[u8]| {
        let p = out.join(name);
        fs::write(&p, bytes).map_err(|e| io_err(&p, e))
    };
    write("run.tlog", &result.tlog)?;
    write("run.csv", result.csv.as_bytes())?;
    write("report.json", result.report.to_json().as_bytes())?;
    let r = &result.report;
    println!(
        "gate_passed={} final_phase={} sim_time={:.2}s wall_time={:.3}s -> {}",
        r.gate_passed,
        r.final_phase,
        r.sim_time,
        r.wall_time,
        out.display()
    );
    Ok(())
}

fn replay(tlog: PathBuf, csv: PathBuf) -> Result<(), HarnessError> {
    let bytes = fs::read(&tlog).map_err(|e| io_err(&tlog, e))?;
    let text = harness::tlog_to_csv(&bytes)?;
    fs::write(&csv, text).map_err(|e| io_err(&csv, e))
}

fn selftest() -> ExitCode {
    let checks = run_selftest();
    let mut ok = true;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        ok &= c.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Run { scenario, seed, duration, out, udp } => run(scenario, seed, duration, out, udp),
        Cmd::Replay { tlog, csv } => replay(tlog, csv),
        Cmd::Selftest => return selftest(),
        Cmd::DefaultScenario => {
            println!("{}", Scenario::default_mission().to_json());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
