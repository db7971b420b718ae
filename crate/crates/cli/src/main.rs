mod args;
mod cache;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Common, CurveArgs, Format};
use cache::Cache;
use commands::{build_curve, exit_code, Ctx, Outcome};
use weilmotive::{Limits, Result};

fn context(curve: &CurveArgs, common: &Common) -> Result<Ctx> {
    let cache = match &common.cache {
        Some(path) => Cache::open(path),
        None => Cache::disabled(),
    };
    Ok(Ctx {
        curve: build_curve(curve)?,
        limits: Limits {
            field_bound: common.bound,
            monomial_bound: common.monomial_bound,
        },
        cache,
    })
}

fn dispatch(command: &Command, ctx: &Ctx) -> Result<Outcome> {
    match command {
        Command::CurveInfo { .. } => commands::curve_info(ctx),
        Command::Decompose { .. } => commands::decompose(ctx),
        Command::Frobenius { p, r, select, .. } => commands::frobenius(ctx, *p, *r, select),
        Command::Zeta { p, check, .. } => commands::zeta(ctx, *p, *check),
        Command::EulerFactor { p, select, .. } => commands::euler_factor(ctx, *p, select),
        Command::MotiveFactor {
            p, params, select, ..
        } => commands::motive_factor(ctx, *p, params, select),
        Command::Invariants { params, .. } => commands::invariants(ctx, params),
        Command::Verify { primes, params, .. } => commands::verify(ctx, primes, params),
        Command::GroupingCheck {
            p,
            r,
            params,
            select,
            ..
        } => commands::grouping_check(ctx, *p, *r, params, select),
        Command::Lseries {
            params,
            pmax,
            terms,
            ..
        } => commands::lseries(ctx, params, *pmax, *terms),
    }
}

fn parts(command: &Command) -> (&'static str, &CurveArgs, &Common) {
    match command {
        Command::CurveInfo { curve, common } => ("curve-info", curve, common),
        Command::Decompose { curve, common } => ("decompose", curve, common),
        Command::Frobenius { curve, common, .. } => ("frobenius", curve, common),
        Command::Zeta { curve, common, .. } => ("zeta", curve, common),
        Command::EulerFactor { curve, common, .. } => ("euler-factor", curve, common),
        Command::MotiveFactor { curve, common, .. } => ("motive-factor", curve, common),
        Command::Invariants { curve, common, .. } => ("invariants", curve, common),
        Command::Verify { curve, common, .. } => ("verify", curve, common),
        Command::GroupingCheck { curve, common, .. } => ("grouping-check", curve, common),
        Command::Lseries { curve, common, .. } => ("lseries", curve, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, curve_args, common) = parts(&cli.command);
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let outcome = context(curve_args, common).and_then(|ctx| {
        let out = dispatch(&cli.command, &ctx)?;
        Ok((ctx.curve, out))
    });
    let (curve, out) = match outcome {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    match common.format {
        Format::Table => print!("{}", out.table),
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("curve".into(), output::curve_json(&curve));
            doc.insert("command".into(), json!(name));
            doc.insert("results".into(), Value::Array(out.results));
            doc.insert("verified".into(), json!(out.verified));
            for (k, v) in out.extra {
                doc.insert(k, v);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable")
            );
        }
    }
    if out.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
