//! `seechart` — summarize charts from the command line, locally or through
//! a running service (`--server`).

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use seechart_client::{Client, ClientError};
use seechart_core::api::{SelectionRequest, SelectionSummary, SummarizeRequest};
use seechart_core::deconstruct::{
    deconstruct_auto, deconstruct_svg_with, DeconstructOptions, Deconstruction,
};
use seechart_core::query::{self, parse_ranges, Selection};
use seechart_core::realize::TemplateRegistry;
use seechart_core::{ChartSpec, LengthLevel, Pipeline};
use seechart_service::error::error_code;
use seechart_service::Config;

#[derive(Debug, Parser)]
#[command(name = "seechart", version, about = "Accessible chart summaries")]
struct Cli {
    /// Route every command through a running service instead of running
    /// the pipeline in-process.
    #[arg(long, global = true, env = "SEECHART_SERVER")]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// SVG, Vega-Lite or chart JSON in, chart JSON (plus warnings) out.
    Deconstruct {
        /// Input file, or "-" for stdin.
        input: String,
        /// Read values from mark geometry even when data labels exist.
        #[arg(long)]
        geometry: bool,
    },
    /// Chart in, natural-language summary out.
    Summarize {
        input: String,
        #[arg(long, default_value = "moderate")]
        length: LengthLevel,
        /// Fixes the template choice; a random seed is printed to stderr.
        #[arg(long)]
        seed: Option<u64>,
        /// Summarize only these point indices, e.g. "0-2,5".
        #[arg(long)]
        select: Option<String>,
        /// Restrict --select to one series.
        #[arg(long, requires = "select")]
        series: Option<usize>,
        /// Template overrides layered over the built-ins (local runs only).
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Print the full JSON response instead of the text.
        #[arg(long)]
        json: bool,
    },
    /// Ranked insight messages as JSON.
    Insights { input: String },
    /// The summary plan (selected and fused messages) as JSON.
    Plan {
        input: String,
        #[arg(long, default_value = "moderate")]
        length: LengthLevel,
    },
    /// Answer a typed question about the chart.
    Answer {
        input: String,
        #[arg(long)]
        query: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "SEECHART_PORT")]
        port: Option<u16>,
        #[arg(long)]
        host: Option<std::net::IpAddr>,
        #[arg(long, env = "SEECHART_TEMPLATES")]
        templates: Option<PathBuf>,
    },
}

/// Exit statuses: 1 usage, 2 input, 3 service or runtime failure.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Input { code: String, message: String },
    Runtime { code: String, message: String },
}

impl Failure {
    fn input(code: &str, message: impl ToString) -> Self {
        Failure::Input {
            code: code.into(),
            message: message.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input { .. } => 2,
            Failure::Runtime { .. } => 3,
        }
    }
}

impl From<seechart_core::Error> for Failure {
    fn from(e: seechart_core::Error) -> Self {
        let code = error_code(&e);
        if code == "template_error" || code == "realize_error" {
            Failure::Runtime {
                code: code.into(),
                message: e.to_string(),
            }
        } else {
            Failure::input(code, e)
        }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        match &e {
            ClientError::Api { code, message, .. } if e.is_input_error() => Failure::Input {
                code: code.clone(),
                message: message.clone(),
            },
            ClientError::Api { code, message, .. } => Failure::Runtime {
                code: code.clone(),
                message: message.clone(),
            },
            _ => Failure::Runtime {
                code: "service_unavailable".into(),
                message: e.to_string(),
            },
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_input(input: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let read = if input == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(input).map(|t| text = t)
    };
    read.map_err(|e| Failure::input("unreadable_input", format!("{input}: {e}")))?;
    Ok(text)
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("response serialization is infallible")
    );
}

enum Backend {
    Local(Pipeline),
    Remote(Client),
}

impl Backend {
    /// Any supported input becomes a validated chart.
    async fn chart(&self, input: &str) -> Result<ChartSpec, Failure> {
        let text = read_input(input)?;
        Ok(self.deconstruct(&text, true).await?.chart)
    }

    async fn deconstruct(
        &self,
        text: &str,
        prefer_labels: bool,
    ) -> Result<Deconstruction, Failure> {
        match self {
            Backend::Local(_) if !prefer_labels => {
                let opts = DeconstructOptions { prefer_labels };
                deconstruct_svg_with(text, &opts)
                    .map_err(|e| Failure::from(seechart_core::Error::from(e)))
            }
            Backend::Local(_) => {
                deconstruct_auto(text).map_err(|e| Failure::from(seechart_core::Error::from(e)))
            }
            Backend::Remote(_) if !prefer_labels => Err(Failure::Usage(
                "--geometry is only available for local runs".into(),
            )),
            Backend::Remote(c) => Ok(c.deconstruct(text).await?),
        }
    }
}

async fn run(cli: Cli) -> Outcome {
    if let Command::Serve {
        port,
        host,
        templates,
    } = cli.command
    {
        return serve(port, host, templates).await;
    }
    let backend = match (&cli.server, &cli.command) {
        (
            Some(_),
            Command::Summarize {
                templates: Some(_), ..
            },
        ) => return Err(Failure::Usage(
            "--templates applies to local runs; start the server with SEECHART_TEMPLATES instead"
                .into(),
        )),
        (Some(url), _) => Backend::Remote(Client::new(url.clone())),
        (
            None,
            Command::Summarize {
                templates: Some(path),
                ..
            },
        ) => Backend::Local(Pipeline::new(
            TemplateRegistry::builtin_with_overrides(path)
                .map_err(|e| Failure::input("template_error", e))?,
        )),
        (None, _) => Backend::Local(Pipeline::default()),
    };

    match cli.command {
        Command::Deconstruct { input, geometry } => {
            let text = read_input(&input)?;
            print_json(&backend.deconstruct(&text, !geometry).await?);
        }
        Command::Summarize {
            input,
            length,
            seed,
            select,
            series,
            json,
            ..
        } => {
            let chart = backend.chart(&input).await?;
            let selection = select
                .map(|text| {
                    parse_ranges(&text)
                        .map(|indices| Selection { indices, series })
                        .map_err(|e| Failure::from(seechart_core::Error::from(e)))
                })
                .transpose()?;
            let chosen = seed.is_none();
            let seed = seed.unwrap_or_else(rand::random);
            match selection {
                None => {
                    let summary = match &backend {
                        Backend::Local(p) => p.summarize(&chart, length, seed)?,
                        Backend::Remote(c) => {
                            c.summarize(&SummarizeRequest {
                                chart,
                                level: length,
                                seed: Some(seed),
                                selection: None,
                            })
                            .await?
                        }
                    };
                    if json {
                        print_json(&summary);
                    } else {
                        println!("{}", summary.text);
                    }
                }
                Some(sel) => {
                    let out = match &backend {
                        Backend::Local(p) => SelectionSummary {
                            summary: p.summarize_selection(&chart, &sel, length, seed)?,
                            description: query::describe_selection(&chart, &sel)
                                .map_err(|e| Failure::from(seechart_core::Error::from(e)))?,
                        },
                        Backend::Remote(c) => {
                            c.summarize_selection(&SelectionRequest {
                                chart,
                                indices: sel.indices,
                                series: sel.series,
                                level: length,
                                seed: Some(seed),
                            })
                            .await?
                        }
                    };
                    if json {
                        print_json(&out);
                    } else {
                        println!("{}", out.summary.text);
                    }
                }
            }
            // echoed so a random run can be replayed with --seed
            if chosen {
                eprintln!("seed: {seed}");
            }
        }
        Command::Insights { input } => {
            let chart = backend.chart(&input).await?;
            match &backend {
                Backend::Local(p) => print_json(&p.insights(&chart)?),
                Backend::Remote(c) => print_json(&c.insights(&chart).await?),
            }
        }
        Command::Plan { input, length } => {
            let chart = backend.chart(&input).await?;
            match &backend {
                Backend::Local(p) => print_json(&p.plan(&chart, length)?),
                Backend::Remote(c) => print_json(&c.plan(&chart, length).await?),
            }
        }
        Command::Answer { input, query, json } => {
            let chart = backend.chart(&input).await?;
            let answer = match &backend {
                Backend::Local(_) => query::answer(&chart, &query),
                Backend::Remote(c) => c.answer(&chart, &query).await?,
            };
            if json {
                print_json(&answer);
            } else {
                println!("{}", answer.text);
            }
        }
        Command::Serve { .. } => unreachable!("handled above"),
    }
    Ok(())
}

async fn serve(
    port: Option<u16>,
    host: Option<std::net::IpAddr>,
    templates: Option<PathBuf>,
) -> Outcome {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .init();
    let mut config = Config::from_env().map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(p) = port {
        config.port = p;
    }
    if let Some(h) = host {
        config.host = h;
    }
    if templates.is_some() {
        config.templates = templates;
    }
    seechart_service::serve(config)
        .await
        .map_err(|e| Failure::Runtime {
            code: "serve_failed".into(),
            message: e.to_string(),
        })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .expect("tokio runtime");
    match runtime.block_on(run(cli)) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error[usage]: {m}"),
                Failure::Input { code, message } | Failure::Runtime { code, message } => {
                    eprintln!("error[{code}]: {message}")
                }
            }
            ExitCode::from(f.exit_code())
        }
    }
}
