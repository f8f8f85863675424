use std::fs;
use std::path::Path;
use std::process::ExitCode;

use flzero_core::parser::OwlImport;
use flzero_core::transform::eliminate_top_bottom_over;
use flzero_core::{
    flip_quantifiers, import_owl_subset, normalize, parse_tbox, serialize_tbox, ConceptId, Reasoner, TBox,
};

use crate::error::{CliError, TIMEOUT};
use crate::{Flags, TransformKind};

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn is_owl(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("owl" | "ofn"))
}

/// Reads a native file, or the supported part of an OWL functional-syntax
/// file (`.owl`, `.ofn`) with a drop report on stderr.
pub fn load(path: &Path) -> Result<TBox, CliError> {
    let text = read(path)?;
    let parse_err = |source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    };
    if is_owl(path) {
        let (tbox, report) = import_owl_subset(&text).map_err(parse_err)?;
        if report.total() > 0 {
            eprintln!("{}: {report}", path.display());
        }
        Ok(tbox)
    } else {
        parse_tbox(&text).map_err(parse_err)
    }
}

/// Query names missing from the file are registered without axioms: they
/// only have the subsumers every name has.
pub fn register(tbox: &mut TBox, name: &str) -> Result<ConceptId, CliError> {
    match tbox.symbols.concept(name) {
        Some(id) => Ok(id),
        None => tbox
            .symbols
            .intern_concept(name)
            .map_err(|e| CliError::Usage(format!("{name:?}: {e}"))),
    }
}

fn prepare(path: &Path, names: &[&str], flags: &Flags) -> Result<(Reasoner, Vec<ConceptId>), CliError> {
    let mut tbox = load(path)?;
    let ids = names
        .iter()
        .map(|n| register(&mut tbox, n))
        .collect::<Result<Vec<_>, _>>()?;
    let reasoner = Reasoner::new(&tbox, flags.options()?)?;
    if let Some(out) = &flags.dump_rete {
        write(out, &reasoner.network().dump(reasoner.prepared()))?;
    }
    Ok((reasoner, ids))
}

fn dump_model(reasoner: &Reasoner, a: ConceptId, flags: &Flags) -> Result<(), CliError> {
    if let Some(out) = &flags.dump_model {
        let run = reasoner.saturate(a, None)?;
        write(out, &run.model.dump(&reasoner.prepared().symbols))?;
    }
    Ok(())
}

pub fn subsume(path: &Path, sub: &str, sup: &str, flags: &Flags) -> Result<ExitCode, CliError> {
    let (reasoner, ids) = prepare(path, &[sub, sup], flags)?;
    let yes = reasoner.subsumes(ids[0], ids[1])?;
    dump_model(&reasoner, ids[0], flags)?;
    println!("{}", if yes { "yes" } else { "no" });
    Ok(ExitCode::SUCCESS)
}

pub fn subsumers(path: &Path, name: &str, flags: &Flags) -> Result<ExitCode, CliError> {
    let (reasoner, ids) = prepare(path, &[name], flags)?;
    let set = reasoner.subsumer_set(ids[0])?;
    dump_model(&reasoner, ids[0], flags)?;
    let mut names: Vec<&str> = set.into_iter().map(|c| reasoner.symbols().concept_name(c)).collect();
    names.sort_unstable();
    for n in names {
        println!("{n}");
    }
    Ok(ExitCode::SUCCESS)
}

pub fn classify(path: &Path, flags: &Flags) -> Result<ExitCode, CliError> {
    let (reasoner, _) = prepare(path, &[], flags)?;
    let result = reasoner.classify()?;
    print!("{}", result.render());
    println!("checksum: {:#018x}", result.checksum());
    if result.timeout_names.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    let mut late: Vec<&str> = result
        .timeout_names
        .iter()
        .map(|&c| result.symbols.concept_name(c))
        .collect();
    late.sort_unstable();
    eprintln!("incomplete: {}", late.join(" "));
    Ok(ExitCode::from(TIMEOUT))
}

pub fn transform(kind: TransformKind, input: &Path, output: &Path) -> Result<ExitCode, CliError> {
    let text = match kind {
        TransformKind::Normalize => serialize_tbox(&normalize(&load(input)?).to_tbox()),
        TransformKind::Reduce => {
            let normal = normalize(&load(input)?);
            let concepts = normal.symbols.concepts().collect();
            let roles = normal.symbols.roles().collect();
            serialize_tbox(&eliminate_top_bottom_over(&normal, &concepts, &roles).to_tbox())
        }
        TransformKind::Flip => {
            let import = OwlImport::parse(&read(input)?).map_err(|source| CliError::Parse {
                path: input.to_path_buf(),
                source,
            })?;
            let flipped = import
                .axioms
                .iter()
                .filter(|(l, r)| l.has_existential() || r.has_existential())
                .count();
            eprintln!("{}: flipped {flipped} axiom(s); {}", input.display(), import.dropped);
            serialize_tbox(&flip_quantifiers(&import))
        }
    };
    write(output, &text)?;
    Ok(ExitCode::SUCCESS)
}
