mod args;
mod commands;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Format, RunConfig};
use report::error_object;

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) => {
            let _ = e.print();
            return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
        Err(e) => {
            print!("{}", error_object("invalid_flags", e.to_string().trim(), None));
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let name = cfg.command_name();
    if let Err(msg) = cfg.validate() {
        print!("{}", error_object("invalid_flags", &msg, Some(name)));
        return ExitCode::from(EXIT_ERROR);
    }
    let report = match commands::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            print!("{}", error_object(e.kind(), &e.to_string(), Some(name)));
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let config = serde_json::to_value(&cfg).expect("config serializes");
    let rendered = report.render(cfg.format, name, &config);
    match destination(&cfg, name) {
        Some(path) => {
            if let Err(e) = fs::write(&path, &rendered) {
                print!("{}", error_object("io", &format!("{}: {e}", path.display()), Some(name)));
                return ExitCode::from(EXIT_ERROR);
            }
            eprintln!("report written to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn destination(cfg: &RunConfig, name: &str) -> Option<PathBuf> {
    if let Some(p) = &cfg.out {
        return Some(p.clone());
    }
    let ext = match cfg.format {
        Format::Json => "json",
        Format::Latex => "tex",
        Format::Text => "txt",
    };
    cfg.out_dir.as_ref().map(|d| d.join(format!("{name}.{ext}")))
}
