use clap::Parser;

use kjdeps::cli::CliRequest;
use kjdeps::pipeline::run_pipeline;

fn main() {
    let request = CliRequest::parse();
    match run_pipeline(&request) {
        Ok(report) => {
            for diagnostic in &report.diagnostics {
                eprintln!("{diagnostic}");
            }
            print!("{}", report.timings.render());
            println!(
                "Analyzed {} files ({} skipped): {} entities, {} relations, {} inference rounds.",
                report.analyzed.len(),
                report.skipped.len(),
                report.entity_count,
                report.relation_count,
                report.rounds_used,
            );
            for output in &report.outputs {
                println!("Wrote {}", output.display());
            }
        }
        Err(error) => {
            eprintln!("error: {error}");
            std::process::exit(1);
        }
    }
}
