//! Command-line front end. `run` takes the argument list and output streams
//! so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 generation or validation failure, 2 input error
//! (unreadable file, malformed graph or grammar, bad usage).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::generator::{generate, GenerationResult};
use crate::grammar::{Grammar, GrammarError, SHIPPED_GRAMMAR};
use crate::semgraph::{parse_graph, validate_graph, ConceptGraph};
use crate::tagcore::dot::{derivation_to_dot, tree_to_dot};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "creole-tag", version, about = "Generate Martinican Creole sentences from conceptual graphs")]
struct Cli {
    /// Grammar file (default: the shipped creole grammar)
    #[arg(long, global = true, env = "CREOLE_GRAMMAR", value_name = "PATH")]
    grammar: Option<PathBuf>,
    /// Stop at the first problem instead of reporting all of them
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Report,
    Dot,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Graph file
    path: Option<PathBuf>,
    /// Graph given inline as JSON
    #[arg(long, value_name = "JSON")]
    inline: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate text from a conceptual graph
    Generate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Load and validate a grammar file
    CheckGrammar {
        /// Grammar to check (default: --grammar, then the shipped one)
        path: Option<PathBuf>,
    },
    /// Run every shipped fixture against the golden corpus
    Demo {
        /// Directory of `*.graph.json` fixtures and golden.tsv (default: the shipped fixtures)
        #[arg(long, value_name = "DIR")]
        fixtures: Option<PathBuf>,
        /// Golden file, `fixture-id<TAB>sentence` per line; `!Kind` expects an error of that kind
        #[arg(long, value_name = "PATH")]
        golden: Option<PathBuf>,
    },
    /// Derived tree and derivation tree of a graph
    Derivation {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "dot")]
        output: Output,
    },
}

pub fn default_fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

// Write failures on stdout/stderr are not actionable here.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{ let _ = writeln!($w, $($arg)*); }};
}

pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{}", rendered);
            } else {
                let _ = write!(out, "{}", rendered);
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    match &cli.command {
        Command::CheckGrammar { path } => check_grammar(&cli, path.as_deref(), &mut io),
        Command::Generate { input, output } => generate_cmd(&cli, input, *output, false, &mut io),
        Command::Derivation { input, output } => generate_cmd(&cli, input, *output, true, &mut io),
        Command::Demo { fixtures, golden } => {
            let dir = fixtures.clone().unwrap_or_else(default_fixtures_dir);
            let golden = golden.clone().unwrap_or_else(|| dir.join("golden.tsv"));
            demo(&cli, &dir, &golden, &mut io)
        }
    }
}

fn read(path: &Path, io: &mut Io<'_>) -> Option<String> {
    match fs::read_to_string(path) {
        Ok(s) => Some(s),
        Err(e) => {
            say!(io.err, "cannot read {}: {}", path.display(), e);
            None
        }
    }
}

fn load_grammar(cli: &Cli, io: &mut Io<'_>) -> Result<Grammar, i32> {
    let src = match &cli.grammar {
        Some(p) => read(p, io).ok_or(EXIT_INPUT)?,
        None => SHIPPED_GRAMMAR.to_string(),
    };
    Grammar::load(&src).map_err(|e| {
        say!(io.err, "{}", e);
        EXIT_INPUT
    })
}

fn check_grammar(cli: &Cli, path: Option<&Path>, io: &mut Io<'_>) -> i32 {
    let (label, src) = match path.or(cli.grammar.as_deref()) {
        Some(p) => match read(p, io) {
            Some(s) => (p.display().to_string(), s),
            None => return EXIT_INPUT,
        },
        None => ("shipped grammar".to_string(), SHIPPED_GRAMMAR.to_string()),
    };
    match Grammar::load(&src) {
        Ok(g) => {
            say!(
                io.out,
                "{}: ok ({} features, {} frames, {} roles, {} entries, {} trees)",
                label,
                g.features.len(),
                g.frames.len(),
                g.roles.len(),
                g.lexicon.len(),
                g.tree_count()
            );
            EXIT_OK
        }
        Err(GrammarError::Validation(problems)) => {
            say!(io.out, "{}: ValidationError", label);
            let shown = if cli.strict { &problems[..1] } else { &problems[..] };
            for p in shown {
                say!(io.out, "  {}", p);
            }
            EXIT_FAILURE
        }
        Err(e) => {
            say!(io.out, "{}: {}", label, e);
            EXIT_FAILURE
        }
    }
}

fn read_graph(input: &Input, io: &mut Io<'_>) -> Result<ConceptGraph, i32> {
    let doc = match (&input.path, &input.inline) {
        (Some(p), _) => read(p, io).ok_or(EXIT_INPUT)?,
        (None, Some(s)) => s.clone(),
        (None, None) => unreachable!("clap requires one input"),
    };
    parse_graph(&doc).map_err(|e| {
        say!(io.err, "{}", e);
        EXIT_INPUT
    })
}

fn generate_cmd(cli: &Cli, input: &Input, output: Output, derivation: bool, io: &mut Io<'_>) -> i32 {
    let grammar = match load_grammar(cli, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let graph = match read_graph(input, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let report = validate_graph(&graph, &grammar);
    if !report.is_clean() {
        let shown = if cli.strict { &report.issues[..1] } else { &report.issues[..] };
        for i in shown {
            say!(io.err, "{}", i);
        }
        return EXIT_FAILURE;
    }
    let result = match generate(&graph, &grammar) {
        Ok(r) => r,
        Err(e) => {
            say!(io.err, "{}", e);
            return EXIT_FAILURE;
        }
    };
    match (output, derivation) {
        (Output::Text, _) => say!(io.out, "{}", result.text),
        (Output::Report, false) => say!(io.out, "{}", result.to_json()),
        (Output::Report, true) => write_provenance(&result, io),
        (Output::Dot, _) => write_dot(&result, io),
    }
    EXIT_OK
}

fn write_provenance(result: &GenerationResult, io: &mut Io<'_>) {
    say!(io.out, "sentence\ttoken\torigin\taddress");
    for (i, s) in result.sentences.iter().enumerate() {
        for t in &s.tokens {
            say!(io.out, "{}\t{}\t{}\t{}", i + 1, t.token.text, t.origin, t.address);
        }
    }
}

fn write_dot(result: &GenerationResult, io: &mut Io<'_>) {
    for (i, s) in result.sentences.iter().enumerate() {
        let _ = write!(io.out, "{}", tree_to_dot(&s.tree, &format!("derived-{}", i + 1)));
        let _ = write!(io.out, "{}", derivation_to_dot(&s.derivation, &format!("derivation-{}", i + 1)));
    }
}

fn demo(cli: &Cli, dir: &Path, golden_path: &Path, io: &mut Io<'_>) -> i32 {
    let grammar = match load_grammar(cli, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let Some(golden_src) = read(golden_path, io) else {
        return EXIT_INPUT;
    };
    let mut golden = std::collections::BTreeMap::new();
    for (n, line) in golden_src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match line.split_once('\t') {
            Some((id, expected)) => {
                golden.insert(id.to_string(), expected.to_string());
            }
            None => {
                say!(io.err, "{}:{}: expected `id<TAB>sentence`", golden_path.display(), n + 1);
                return EXIT_INPUT;
            }
        }
    }
    let mut fixtures: Vec<(String, PathBuf)> = match fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(Result::ok)
            .filter_map(|e| {
                let name = e.file_name().to_string_lossy().into_owned();
                name.strip_suffix(".graph.json").map(|id| (id.to_string(), e.path()))
            })
            .collect(),
        Err(e) => {
            say!(io.err, "cannot read {}: {}", dir.display(), e);
            return EXIT_INPUT;
        }
    };
    fixtures.sort();

    let mut failures = 0usize;
    for (id, path) in &fixtures {
        let Some(doc) = read(path, io) else {
            return EXIT_INPUT;
        };
        let got = match parse_graph(&doc) {
            Err(e) => format!("!{}", e),
            Ok(g) => match generate(&g, &grammar) {
                Ok(r) => r.text,
                Err(e) => format!("!{}", e.kind()),
            },
        };
        say!(io.out, "{}\t{}", id, got);
        let ok = match golden.get(id) {
            Some(expected) if *expected == got => true,
            Some(expected) => {
                say!(io.err, "MISMATCH {}: expected `{}`, got `{}`", id, expected, got);
                false
            }
            None => {
                say!(io.err, "MISSING {}: no golden entry", id);
                false
            }
        };
        if !ok {
            failures += 1;
            if cli.strict {
                return EXIT_FAILURE;
            }
        }
    }
    for id in golden.keys() {
        if !fixtures.iter().any(|(f, _)| f == id) {
            say!(io.err, "MISSING {}: no fixture file", id);
            failures += 1;
        }
    }
    if failures > 0 {
        say!(io.err, "{} of {} fixtures failed", failures, fixtures.len());
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}
