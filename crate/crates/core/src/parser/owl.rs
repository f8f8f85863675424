//! Lossy import of a small OWL 2 functional-syntax subset.
//!
//! Supported: `SubClassOf`, `EquivalentClasses` (split into inclusions),
//! `ObjectIntersectionOf`, `ObjectAllValuesFrom`, `ObjectSomeValuesFrom`
//! (kept only for quantifier flipping), `owl:Thing`, `owl:Nothing`, and class
//! or object-property declarations. Every other axiom is dropped and counted
//! by kind in a [`DropReport`].

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use super::ParseError;
use crate::concept::Concept;
use crate::symbols::{ConceptId, RoleId, SymbolTable};
use crate::tbox::{Gci, TBox};

const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
const SOME_KIND: &str = "ObjectSomeValuesFrom";

/// Class expression of the imported subset, existentials included.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassExpr {
    Thing,
    Nothing,
    Class(ConceptId),
    And(Vec<ClassExpr>),
    All(RoleId, Box<ClassExpr>),
    Some(RoleId, Box<ClassExpr>),
}

impl ClassExpr {
    pub fn has_existential(&self) -> bool {
        match self {
            ClassExpr::Some(..) => true,
            ClassExpr::And(v) => v.iter().any(ClassExpr::has_existential),
            ClassExpr::All(_, c) => c.has_existential(),
            _ => false,
        }
    }

    /// Converts to a concept; existentials become value restrictions when
    /// `flip` is set and make the conversion fail otherwise.
    pub fn to_concept(&self, flip: bool) -> Option<Concept> {
        Some(match self {
            ClassExpr::Thing => Concept::Top,
            ClassExpr::Nothing => Concept::Bottom,
            ClassExpr::Class(a) => Concept::Name(*a),
            ClassExpr::And(parts) => {
                Concept::and(parts.iter().map(|p| p.to_concept(flip)).collect::<Option<Vec<_>>>()?)
            }
            ClassExpr::All(r, c) => Concept::forall(*r, c.to_concept(flip)?),
            ClassExpr::Some(r, c) if flip => Concept::forall(*r, c.to_concept(flip)?),
            ClassExpr::Some(..) => return None,
        })
    }
}

/// Axioms that were not imported, counted by their OWL kind.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct DropReport {
    pub by_kind: BTreeMap<String, usize>,
}

impl DropReport {
    pub fn total(&self) -> usize {
        self.by_kind.values().sum()
    }

    fn record(&mut self, kind: &str) {
        *self.by_kind.entry(kind.to_owned()).or_default() += 1;
    }
}

impl fmt::Display for DropReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dropped {} axiom(s)", self.total())?;
        for (kind, n) in &self.by_kind {
            write!(f, "\n  {kind}: {n}")?;
        }
        Ok(())
    }
}

/// Result of reading a functional-syntax document.
#[derive(Clone, Debug, Default)]
pub struct OwlImport {
    pub symbols: SymbolTable,
    pub axioms: Vec<(ClassExpr, ClassExpr)>,
    pub dropped: DropReport,
}

impl OwlImport {
    /// Strict conversion: inclusions mentioning an existential are dropped.
    pub fn to_tbox(&self) -> (TBox, DropReport) {
        let mut report = self.dropped.clone();
        let mut axioms = Vec::new();
        for (sub, sup) in &self.axioms {
            match (sub.to_concept(false), sup.to_concept(false)) {
                (Some(l), Some(r)) => axioms.push(Gci::new(l, r)),
                _ => report.record(SOME_KIND),
            }
        }
        (TBox::new(self.symbols.clone(), axioms), report)
    }
}

/// Parses functional syntax and returns the FL⊥ part plus a drop report.
pub fn import_owl_subset(text: &str) -> Result<(TBox, DropReport), ParseError> {
    Ok(OwlImport::parse(text)?.to_tbox())
}

// ---------------------------------------------------------------------------
// S-expression layer

#[derive(Debug)]
enum Sexp {
    Atom(String, usize, usize),
    Iri(String, usize, usize),
    Literal,
    Call(String, Vec<Sexp>, usize, usize),
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom(_, l, c) | Sexp::Iri(_, l, c) | Sexp::Call(_, _, l, c) => (*l, *c),
            Sexp::Literal => (0, 0),
        }
    }
}

struct Reader<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _text: &'a str,
}

impl Reader<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn is_atom_char(c: char) -> bool {
        !(c.is_whitespace() || matches!(c, '(' | ')' | '"' | '<'))
    }

    /// Reads one expression; `None` at a closing parenthesis or end of input.
    fn next(&mut self) -> Result<Option<Sexp>, ParseError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else { return Ok(None) };
        match c {
            ')' => Ok(None),
            '(' => Err(self.error("unexpected `(`")),
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some(c) if c.is_whitespace() => return Err(self.error("whitespace inside IRI")),
                        Some(c) => iri.push(c),
                        None => return Err(ParseError::new(line, column, "unterminated IRI")),
                    }
                }
                Ok(Some(Sexp::Iri(iri, line, column)))
            }
            '"' => {
                self.bump();
                loop {
                    match self.bump() {
                        Some('\\') => {
                            self.bump();
                        }
                        Some('"') => break,
                        Some(_) => {}
                        None => return Err(ParseError::new(line, column, "unterminated string literal")),
                    }
                }
                // Language tags and datatypes trail the literal.
                if self.peek() == Some('@') {
                    while self.peek().is_some_and(Self::is_atom_char) {
                        self.bump();
                    }
                } else if self.peek() == Some('^') {
                    while self.peek().is_some_and(Self::is_atom_char) {
                        self.bump();
                    }
                    if self.peek() == Some('<') {
                        self.next()?;
                    }
                }
                Ok(Some(Sexp::Literal))
            }
            _ => {
                let mut word = String::new();
                while let Some(c) = self.peek().filter(|&c| Self::is_atom_char(c)) {
                    word.push(c);
                    self.bump();
                }
                if self.peek() == Some('(') {
                    self.bump();
                    let mut args = Vec::new();
                    while let Some(arg) = self.next()? {
                        args.push(arg);
                    }
                    if self.bump() != Some(')') {
                        return Err(ParseError::new(line, column, format!("unclosed `{word}(`")));
                    }
                    Ok(Some(Sexp::Call(word, args, line, column)))
                } else {
                    Ok(Some(Sexp::Atom(word, line, column)))
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Interpretation

/// Marker for a construct outside the subset; carries the offending kind.
struct Unsupported(String);

enum ExprError {
    Syntax(ParseError),
    Unsupported(Unsupported),
}

impl From<ParseError> for ExprError {
    fn from(e: ParseError) -> Self {
        ExprError::Syntax(e)
    }
}

#[derive(Default)]
struct Importer {
    prefixes: HashMap<String, String>,
    names: HashMap<String, String>,
    used: HashSet<String>,
    out: OwlImport,
}

fn local_part(iri: &str) -> &str {
    let cut = iri.rfind(['#', '/', ':']).map_or(0, |i| i + 1);
    &iri[cut..]
}

fn sanitize(raw: &str) -> String {
    let mut s: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
        s.insert(0, '_');
    }
    if matches!(s.as_str(), "top" | "bot" | "all") {
        s.push('_');
    }
    s
}

impl Importer {
    fn resolve(&self, node: &Sexp) -> Result<String, ParseError> {
        match node {
            Sexp::Iri(iri, ..) => Ok(iri.clone()),
            Sexp::Atom(word, line, column) => {
                let Some((prefix, local)) = word.split_once(':') else {
                    return Err(ParseError::new(*line, *column, format!("`{word}` is not an IRI")));
                };
                let key = format!("{prefix}:");
                Ok(match self.prefixes.get(&key) {
                    Some(ns) => format!("{ns}{local}"),
                    None if prefix == "owl" => format!("{OWL_NS}{local}"),
                    None => word.clone(),
                })
            }
            other => {
                let (l, c) = other.pos();
                Err(ParseError::new(l, c, "expected an entity IRI"))
            }
        }
    }

    /// Maps an IRI to a native-syntax name, unique per IRI.
    fn native_name(&mut self, iri: &str) -> String {
        if let Some(n) = self.names.get(iri) {
            return n.clone();
        }
        let base = sanitize(local_part(iri));
        let mut name = base.clone();
        let mut k = 2;
        while self.used.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        self.used.insert(name.clone());
        self.names.insert(iri.to_owned(), name.clone());
        name
    }

    fn class(&mut self, node: &Sexp) -> Result<ClassExpr, ExprError> {
        let iri = self.resolve(node)?;
        if iri == format!("{OWL_NS}Thing") {
            return Ok(ClassExpr::Thing);
        }
        if iri == format!("{OWL_NS}Nothing") {
            return Ok(ClassExpr::Nothing);
        }
        let name = self.native_name(&iri);
        let (l, c) = node.pos();
        self.out
            .symbols
            .intern_concept(&name)
            .map(ClassExpr::Class)
            .map_err(|e| ExprError::Syntax(ParseError::new(l, c, e.to_string())))
    }

    fn role(&mut self, node: &Sexp) -> Result<RoleId, ExprError> {
        if let Sexp::Call(kind, ..) = node {
            return Err(ExprError::Unsupported(Unsupported(kind.clone())));
        }
        let iri = self.resolve(node)?;
        let name = self.native_name(&iri);
        let (l, c) = node.pos();
        self.out
            .symbols
            .intern_role(&name)
            .map_err(|e| ExprError::Syntax(ParseError::new(l, c, e.to_string())))
    }

    fn expr(&mut self, node: &Sexp) -> Result<ClassExpr, ExprError> {
        let Sexp::Call(kind, args, line, column) = node else {
            return self.class(node);
        };
        let arity = |n: usize| -> Result<(), ExprError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(ParseError::new(*line, *column, format!("{kind} expects {n} arguments")).into())
            }
        };
        match kind.as_str() {
            "ObjectIntersectionOf" => {
                if args.len() < 2 {
                    return Err(ParseError::new(*line, *column, "ObjectIntersectionOf needs two operands").into());
                }
                Ok(ClassExpr::And(
                    args.iter().map(|a| self.expr(a)).collect::<Result<_, _>>()?,
                ))
            }
            "ObjectAllValuesFrom" => {
                arity(2)?;
                let r = self.role(&args[0])?;
                Ok(ClassExpr::All(r, Box::new(self.expr(&args[1])?)))
            }
            "ObjectSomeValuesFrom" => {
                arity(2)?;
                let r = self.role(&args[0])?;
                Ok(ClassExpr::Some(r, Box::new(self.expr(&args[1])?)))
            }
            _ => Err(ExprError::Unsupported(Unsupported(kind.clone()))),
        }
    }

    fn operands(args: &[Sexp]) -> &[Sexp] {
        let skip = args
            .iter()
            .take_while(|a| matches!(a, Sexp::Call(k, ..) if k == "Annotation"))
            .count();
        &args[skip..]
    }

    fn axiom(&mut self, node: &Sexp) -> Result<(), ParseError> {
        let Sexp::Call(kind, args, line, column) = node else {
            let (l, c) = node.pos();
            return Err(ParseError::new(l, c, "expected an axiom"));
        };
        match kind.as_str() {
            "Declaration" => {
                if let Some(Sexp::Call(entity, inner, ..)) = Self::operands(args).first() {
                    let Some(target) = inner.first() else { return Ok(()) };
                    let res = match entity.as_str() {
                        "Class" => self.class(target).map(|_| ()),
                        "ObjectProperty" => self.role(target).map(|_| ()),
                        _ => Ok(()),
                    };
                    if let Err(ExprError::Syntax(e)) = res {
                        return Err(e);
                    }
                }
                Ok(())
            }
            "Import" | "Annotation" => Ok(()),
            "SubClassOf" | "EquivalentClasses" => {
                let ops = Self::operands(args);
                if kind == "SubClassOf" && ops.len() != 2 || ops.len() < 2 {
                    return Err(ParseError::new(*line, *column, format!("malformed {kind}")));
                }
                let mut exprs = Vec::new();
                for op in ops {
                    match self.expr(op) {
                        Ok(e) => exprs.push(e),
                        Err(ExprError::Syntax(e)) => return Err(e),
                        Err(ExprError::Unsupported(Unsupported(k))) => {
                            self.out.dropped.record(&k);
                            return Ok(());
                        }
                    }
                }
                if kind == "SubClassOf" {
                    let sup = exprs.pop().unwrap();
                    let sub = exprs.pop().unwrap();
                    self.out.axioms.push((sub, sup));
                } else {
                    // Pairs for two operands, a closing cycle of inclusions otherwise.
                    let n = exprs.len();
                    let links = if n == 2 { 1 } else { n };
                    for i in 0..links {
                        self.out.axioms.push((exprs[i].clone(), exprs[(i + 1) % n].clone()));
                    }
                    if n == 2 {
                        self.out.axioms.push((exprs[1].clone(), exprs[0].clone()));
                    }
                }
                Ok(())
            }
            other => {
                self.out.dropped.record(other);
                Ok(())
            }
        }
    }
}

impl OwlImport {
    pub fn parse(text: &str) -> Result<OwlImport, ParseError> {
        let mut reader = Reader {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            _text: text,
        };
        let mut importer = Importer::default();
        loop {
            let node = reader.next()?;
            let Some(node) = node else {
                if reader.peek() == Some(')') {
                    return Err(reader.error("unbalanced `)`"));
                }
                break;
            };
            match &node {
                Sexp::Call(kind, args, line, column) if kind == "Prefix" => {
                    // Prefix(pfx:=<iri>) reads as the atom `pfx:=` and an IRI.
                    match args.as_slice() {
                        [Sexp::Atom(p, ..), Sexp::Iri(iri, ..)] if p.ends_with('=') => {
                            importer
                                .prefixes
                                .insert(p.trim_end_matches('=').to_owned(), iri.clone());
                        }
                        _ => return Err(ParseError::new(*line, *column, "malformed Prefix declaration")),
                    }
                }
                Sexp::Call(kind, args, ..) if kind == "Ontology" => {
                    for arg in args {
                        match arg {
                            Sexp::Iri(..) => {}
                            _ => importer.axiom(arg)?,
                        }
                    }
                }
                other => {
                    let (l, c) = other.pos();
                    return Err(ParseError::new(l, c, "expected Prefix(...) or Ontology(...)"));
                }
            }
        }
        Ok(importer.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::serialize_tbox;
    use crate::tbox::Dialect;

    fn wrap(body: &str) -> String {
        format!(
            "Prefix(:=<http://example.org/onto#>)\nPrefix(owl:=<http://www.w3.org/2002/07/owl#>)\nOntology(<http://example.org/onto>\n{body}\n)\n"
        )
    }

    #[test]
    fn value_restriction_maps_directly() {
        let (t, report) = import_owl_subset(&wrap("SubClassOf(:A ObjectAllValuesFrom(:r :B))")).unwrap();
        assert_eq!(serialize_tbox(&t), "A [= all r.B\n");
        assert_eq!(report.total(), 0);
    }

    #[test]
    fn role_inclusions_are_dropped_and_counted() {
        let (t, report) = import_owl_subset(&wrap("SubObjectPropertyOf(:r :s)\nSubClassOf(:A :B)")).unwrap();
        assert_eq!(t.axioms.len(), 1);
        assert_eq!(report.by_kind.get("SubObjectPropertyOf"), Some(&1));
        assert_eq!(report.total(), 1);
    }

    #[test]
    fn nothing_gives_bottom() {
        let (t, _) = import_owl_subset(&wrap("SubClassOf(:A owl:Nothing)")).unwrap();
        assert_eq!(serialize_tbox(&t), "A [= bot\n");
        assert_eq!(t.dialect(), Dialect::FlBot);
    }

    #[test]
    fn equivalence_splits_into_two_inclusions() {
        let (t, _) = import_owl_subset(&wrap(
            "EquivalentClasses(:A ObjectIntersectionOf(:B ObjectAllValuesFrom(:r owl:Thing)))",
        ))
        .unwrap();
        assert_eq!(serialize_tbox(&t), "A [= B & all r.top\nB & all r.top [= A\n");
    }

    #[test]
    fn existentials_are_dropped_by_strict_import() {
        let import = OwlImport::parse(&wrap(
            "Declaration(Class(:Z))\nSubClassOf(Annotation(rdfs:label \"x\"@en) :A ObjectSomeValuesFrom(:r :B))",
        ))
        .unwrap();
        assert_eq!(import.axioms.len(), 1);
        let (t, report) = import.to_tbox();
        assert!(t.axioms.is_empty());
        assert_eq!(report.by_kind.get(SOME_KIND), Some(&1));
        assert!(t.symbols.concept("Z").is_some());
    }

    #[test]
    fn unsupported_class_constructors_drop_the_axiom() {
        let (t, report) =
            import_owl_subset(&wrap("SubClassOf(:A ObjectUnionOf(:B :C))\nDisjointClasses(:A :B)")).unwrap();
        assert!(t.axioms.is_empty());
        assert_eq!(report.by_kind.get("ObjectUnionOf"), Some(&1));
        assert_eq!(report.by_kind.get("DisjointClasses"), Some(&1));
    }

    #[test]
    fn full_iris_and_name_collisions() {
        let (t, _) = import_owl_subset(&wrap(
            "SubClassOf(<http://a.org/x#Cell> <http://b.org/y/Cell>)\nSubClassOf(<http://c.org/1-top> :all)",
        ))
        .unwrap();
        assert_eq!(serialize_tbox(&t), "Cell [= Cell_2\n_1_top [= all_\n");
    }

    #[test]
    fn syntax_errors_are_reported() {
        assert!(OwlImport::parse("Ontology(SubClassOf(:A :B)").is_err());
        assert!(OwlImport::parse("Ontology(SubClassOf(:A))").is_err());
        assert!(OwlImport::parse("Ontology(<http://x").is_err());
        assert!(OwlImport::parse("SubClassOf(:A :B)").is_err());
        assert!(OwlImport::parse("Ontology())").is_err());
    }
}
