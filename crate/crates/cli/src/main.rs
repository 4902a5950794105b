//! Command-line front end: parse matrices and deformation parameters, run
//! the checkers, models and searches, and emit key-value certificates and
//! CSV tables. Exit codes: 0 = holds / success, 1 = violated / incompatible,
//! 2 = usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ncup_core::{
    bae_model, check_form, find_violation, gain_sweep, noise_matrix, nqt_feasibility,
    oup_matrix, rsup, scalar_measures, scalar_ozawa, standard_j, symplectic_spectrum,
    CovarianceMatrix, NCParams, Observable, SearchConfig, DEFAULT_TOL,
};

mod io;
mod report;

use io::MatrixDocument;
use report::{cert_line, kv};

#[derive(Parser)]
#[command(name = "ncup", version, about = "Uncertainty-principle certificates on deformed phase spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct DeformationArgs {
    /// Position-position deformation (units of area).
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Momentum-momentum deformation (units of momentum^2).
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Planck constant scale.
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

impl DeformationArgs {
    fn params(&self) -> Result<NCParams, String> {
        NCParams::new(self.theta, self.eta, self.hbar).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Williamson values of A relative to the form Xi.
    Spectrum {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        xi: PathBuf,
    },
    /// Positivity certificates for the matrix uncertainty inequalities.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Backaction-evading amplifier model on a probe covariance.
    Bae {
        #[command(flatten)]
        deformation: DeformationArgs,
        /// Amplifier gain.
        #[arg(long)]
        gain: f64,
        /// Probe covariance matrix file.
        #[arg(long)]
        probe: PathBuf,
        #[command(subcommand)]
        action: BaeAction,
    },
    /// Noiseless-transducer feasibility verdict.
    Nqt {
        #[command(flatten)]
        deformation: DeformationArgs,
        /// Object covariance matrix file.
        #[arg(long)]
        object: PathBuf,
        /// Probe covariance matrix file.
        #[arg(long)]
        probe: PathBuf,
    },
    /// First-order coefficient tables from the evolution engine.
    Evolve {
        /// Which interaction to evolve.
        #[arg(long, value_parser = ["bae", "nqt"])]
        model: String,
        #[command(flatten)]
        deformation: DeformationArgs,
        /// Gain (amplifier model only).
        #[arg(long)]
        gain: Option<f64>,
        /// Also evaluate each coefficient at the given theta, eta.
        #[arg(long)]
        exact: bool,
    },
    /// Randomized search for a probe violating the commutative inequality
    /// while satisfying the deformed one.
    Search {
        #[command(flatten)]
        deformation: DeformationArgs,
        #[arg(long)]
        gain: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// RNG seed; runs with the same seed are byte-identical.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        refine_steps: usize,
        /// Write the search result as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Violation diagnostics of a fixed probe over a log-spaced gain grid.
    Sweep {
        #[command(flatten)]
        deformation: DeformationArgs,
        #[arg(long)]
        probe: PathBuf,
        #[arg(long)]
        g_from: f64,
        #[arg(long)]
        g_to: f64,
        #[arg(long)]
        steps: usize,
        /// Write the CSV table to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Preparation inequality: Sigma + (i hbar/2) J >= 0.
    Rsup {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Generic form check: A + (i/2) Xi >= 0.
    Form {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        xi: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Matrix noise-disturbance inequality K + (i/2)(G + Gamma) >= 0.
    Oup {
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Noncommutative extension K + (i/2)(G + Gamma - T) >= 0.
    Ncoup {
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        t: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum BaeAction {
    /// Certify the commutative and deformed inequalities on the noise matrix.
    Check,
}

#[derive(Serialize)]
struct SearchOutput {
    found: bool,
    seed: u64,
    samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda1_j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda1_xi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    physical: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<MatrixDocument>,
}

fn main() -> ExitCode {
    // die quietly on closed pipes instead of panicking mid-print
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<u8, String> {
    match cmd {
        Command::Spectrum { a, xi } => {
            let a = io::load_covariance(&a, "a")?;
            let xi = io::load_skew(&xi, "xi")?;
            let spec = symplectic_spectrum(&a, &xi).map_err(|e| e.to_string())?;
            println!("{}", kv("count", spec.values.len()));
            for (i, v) in spec.values.iter().enumerate() {
                println!("{}", kv(&format!("lambda_{}", i + 1), v));
            }
            Ok(0)
        }
        Command::Check { what } => run_check(what),
        Command::Bae { deformation, gain, probe, action: BaeAction::Check } => {
            let p = deformation.params()?;
            let w = io::load_covariance(&probe, "probe")?;
            run_bae_check(&p, gain, &w)
        }
        Command::Nqt { deformation, object, probe } => {
            let p = deformation.params()?;
            let z = io::load_covariance(&object, "object")?;
            let w = io::load_covariance(&probe, "probe")?;
            let rep = nqt_feasibility(&z, &w, &p, DEFAULT_TOL).map_err(|e| e.to_string())?;
            println!("{}", cert_line(&rep, &params_kv(&p)));
            Ok(if rep.holds { 0 } else { 1 })
        }
        Command::Evolve { model, deformation, gain, exact } => {
            let p = deformation.params()?;
            run_evolve(&model, &p, gain, exact)
        }
        Command::Search { deformation, gain, samples, seed, refine_steps, out } => {
            let p = deformation.params()?;
            let cfg = SearchConfig { params: p, gain, samples, seed, refine_steps };
            let hit = find_violation(&cfg).map_err(|e| e.to_string())?;
            let output = match &hit {
                Some(w) => SearchOutput {
                    found: true,
                    seed,
                    samples,
                    lambda1_j: Some(w.lambda1_j),
                    lambda1_xi: Some(w.lambda1_xi),
                    physical: Some(w.physical),
                    witness: Some(MatrixDocument::from_mat(w.w_cov.as_mat())),
                },
                None => SearchOutput {
                    found: false,
                    seed,
                    samples,
                    lambda1_j: None,
                    lambda1_xi: None,
                    physical: None,
                    witness: None,
                },
            };
            let mut line = vec![
                kv("found", output.found),
                kv("seed", seed),
                kv("samples", samples),
            ];
            if let Some(w) = &hit {
                line.push(kv("lambda1_J", w.lambda1_j));
                line.push(kv("lambda1_Xi", w.lambda1_xi));
                line.push(kv("physical", w.physical));
            }
            println!("{}", line.join(" "));
            if let Some(path) = out {
                io::save_json(&path, &output)?;
            }
            Ok(if output.found { 0 } else { 1 })
        }
        Command::Sweep { deformation, probe, g_from, g_to, steps, out } => {
            let p = deformation.params()?;
            let w = io::load_covariance(&probe, "probe")?;
            let rows = gain_sweep(&p, &w, g_from, g_to, steps).map_err(|e| e.to_string())?;
            let mut table = String::from("G,lambda1_J,lambda1_Xi,holds_J,holds_Xi\n");
            for r in &rows {
                table.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.gain, r.lambda1_j, r.lambda1_xi, r.holds_j, r.holds_xi
                ));
            }
            match out {
                Some(path) => std::fs::write(&path, table)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{table}"),
            }
            Ok(0)
        }
    }
}

fn run_check(what: CheckCommand) -> Result<u8, String> {
    let rep = match what {
        CheckCommand::Rsup { sigma, hbar, tol } => {
            let sigma = io::load_covariance(&sigma, "sigma")?;
            rsup(&sigma, hbar, tol).map_err(|e| e.to_string())?
        }
        CheckCommand::Form { a, xi, tol } => {
            let a = io::load_covariance(&a, "a")?;
            let xi = io::load_skew(&xi, "xi")?;
            check_form(&a, &xi, tol).map_err(|e| e.to_string())?
        }
        CheckCommand::Oup { k, g, gamma, tol } => {
            let k = io::load_covariance(&k, "k")?;
            let g = io::load_skew(&g, "g")?;
            let gamma = io::load_skew(&gamma, "gamma")?;
            let zero = ncup_core::SkewForm::new(ncup_core::RMat::zeros(k.dim()))
                .map_err(|e| e.to_string())?;
            oup_matrix(&k, &g, &gamma, &zero, tol).map_err(|e| e.to_string())?
        }
        CheckCommand::Ncoup { k, g, gamma, t, tol } => {
            let k = io::load_covariance(&k, "k")?;
            let g = io::load_skew(&g, "g")?;
            let gamma = io::load_skew(&gamma, "gamma")?;
            let t = io::load_skew(&t, "t")?;
            oup_matrix(&k, &g, &gamma, &t, tol).map_err(|e| e.to_string())?
        }
    };
    println!("{}", cert_line(&rep, &[]));
    Ok(if rep.holds { 0 } else { 1 })
}

fn params_kv(p: &NCParams) -> Vec<(&'static str, String)> {
    vec![
        ("theta", p.theta().to_string()),
        ("eta", p.eta().to_string()),
        ("hbar", p.hbar().to_string()),
    ]
}

fn run_bae_check(p: &NCParams, gain: f64, w: &CovarianceMatrix) -> Result<u8, String> {
    let model = bae_model(p, gain).map_err(|e| e.to_string())?;
    let model_c = bae_model(&NCParams::commutative(p.hbar()).map_err(|e| e.to_string())?, gain)
        .map_err(|e| e.to_string())?;
    let k_c = noise_matrix(&model_c, None, w).map_err(|e| e.to_string())?;
    let hj = standard_j(2).scale(p.hbar());

    let probe_physical = check_form(w, &ncup_core::build_omega(p), DEFAULT_TOL)
        .map_err(|e| e.to_string())?
        .holds;
    println!(
        "{} {} {}",
        params_kv(p)
            .iter()
            .map(|(k, v)| kv(k, v))
            .collect::<Vec<_>>()
            .join(" "),
        kv("gain", gain),
        kv("probe_physical", probe_physical)
    );

    let mut rep_j = check_form(&k_c, &hj, DEFAULT_TOL).map_err(|e| e.to_string())?;
    rep_j.principle = ncup_core::Principle::OupMatrix;
    println!("{}", cert_line(&rep_j, &[("form", "standard".into())]));

    let mut rep_xi = check_form(&k_c, &model.xi_eff, DEFAULT_TOL).map_err(|e| e.to_string())?;
    rep_xi.principle = ncup_core::Principle::Ncoup;
    println!("{}", cert_line(&rep_xi, &[("form", "deformed".into())]));

    let (eps, chi) = scalar_measures(&k_c).map_err(|e| e.to_string())?;
    for i in 0..2 {
        let sc = scalar_ozawa(eps[i], chi[i], 0.0, 0.0, p.hbar()).map_err(|e| e.to_string())?;
        println!(
            "{} {} {} {} {} {} {}",
            kv("scalar_pair", i + 1),
            kv("eps", eps[i]),
            kv("chi", chi[i]),
            kv("product", sc.product_lhs),
            kv("three_term", sc.three_term_lhs),
            kv("bound", sc.bound),
            kv("holds", sc.three_term_holds)
        );
    }
    Ok(if rep_xi.holds { 0 } else { 1 })
}

fn run_evolve(model: &str, p: &NCParams, gain: Option<f64>, exact: bool) -> Result<u8, String> {
    use ncup_core::{bae_hamiltonian, evolve, evolve_piecewise, nqt_stages, CommutatorForm};

    let form = CommutatorForm::new(p);
    let mut header = vec![kv("model", model)];
    let evolved: Vec<Observable> = match model {
        "bae" => {
            let g = gain.ok_or("--gain is required for the amplifier model")?;
            header.push(kv("gain", g));
            let h = bae_hamiltonian(g, 1.0).map_err(|e| e.to_string())?;
            (0..ncup_core::BASIS_LEN)
                .map(|i| evolve(&Observable::basis(i), &h, &form))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?
        }
        "nqt" => {
            let stages = nqt_stages(1.0, 2.0).map_err(|e| e.to_string())?;
            (0..ncup_core::BASIS_LEN)
                .map(|i| evolve_piecewise(&Observable::basis(i), &stages, &form))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown model '{other}'")),
    };
    header.extend(params_kv(p).iter().map(|(k, v)| kv(k, v)));
    println!("{}", header.join(" "));
    for (row, obs) in evolved.iter().enumerate() {
        for (idx, c) in obs.coeffs.iter().enumerate() {
            if c.c0 == 0.0 && c.c_theta == 0.0 && c.c_eta == 0.0 {
                continue;
            }
            let mut line = vec![
                kv("out", ncup_core::BASIS_LABELS[row]),
                kv("in", ncup_core::BASIS_LABELS[idx]),
                kv("c0", c.c0),
                kv("c_theta", c.c_theta),
                kv("c_eta", c.c_eta),
            ];
            if exact {
                line.push(kv("value", c.eval(p)));
            }
            println!("{}", line.join(" "));
        }
    }
    Ok(0)
}
