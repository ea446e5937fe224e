mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;
use manifest::Recorder;

fn run(cli: &Cli) -> anyhow::Result<bool> {
    lemnikit::parallel::configure_threads(cli.threads)?;
    let mut ctx = Ctx {
        seed: cli.seed,
        out: cli.out.clone(),
        rec: Recorder::new(cli.seed),
    };
    let pass = match &cli.command {
        Command::Area(a) => commands::area(&mut ctx, a)?,
        Command::BenchSamplers(a) => commands::bench_samplers(&mut ctx, a)?,
        Command::TableMinimizers(a) => commands::table_minimizers(&mut ctx, a)?,
        Command::Verify(a) => commands::verify(&mut ctx, a)?,
        Command::Construct(c) => commands::construct(&mut ctx, c)?,
        Command::Search(c) => commands::search(&mut ctx, c)?,
    };
    ctx.rec.finish(cli.out.as_deref())?;
    Ok(pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
