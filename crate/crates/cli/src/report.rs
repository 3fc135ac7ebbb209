//! Command reports and their two renderings. The machine format is described
//! in `docs/report-schema.md`.

use std::fmt::{self, Write as _};

use morita_core::report::{Status, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "pass" => Verdict::Pass,
            "fail" => Verdict::Fail,
            "unknown" => Verdict::Unknown,
            _ => return None,
        })
    }
}

impl From<Status> for Verdict {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => Verdict::Pass,
            Status::Fail => Verdict::Fail,
            Status::Unknown => Verdict::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub fields: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

impl Section {
    pub fn new(title: &str) -> Self {
        Section { title: title.into(), fields: Vec::new(), tables: Vec::new() }
    }

    pub fn field(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn table(&mut self, t: Table) -> &mut Self {
        self.tables.push(t);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('t') => out.push('\t'),
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), verdict: Verdict::Pass, sections: Vec::new() }
    }

    pub fn section(&mut self, s: Section) {
        self.sections.push(s);
    }

    /// Adds a section listing every check of a verification report.
    pub fn checks(&mut self, title: &str, r: &VerificationReport) {
        let mut t = Table::new("checks", &["id", "status", "detail", "witness"]);
        for c in &r.checks {
            let w = c.witness.as_ref().map(|w| format!("{w:?}")).unwrap_or_default();
            t.row(vec![c.id.clone(), Verdict::from(c.status).as_str().into(), c.detail.clone(), w]);
        }
        let mut s = Section::new(title);
        s.field("subject", &r.subject).table(t);
        self.section(s);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Machine => self.to_machine(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ {}", self.command);
        for s in &self.sections {
            let _ = writeln!(out, "\n== {}", s.title);
            let width = s.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &s.fields {
                let _ = writeln!(out, "{k:>width$}: {v}");
            }
            for t in &s.tables {
                let _ = writeln!(out, "-- {}", t.name);
                let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
                for r in &t.rows {
                    for (i, c) in r.iter().enumerate() {
                        if i < widths.len() {
                            widths[i] = widths[i].max(c.chars().count());
                        }
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                let _ = writeln!(out, "{}", line(&t.header));
                for r in &t.rows {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
        }
        let _ = writeln!(out, "\nverdict: {}", self.verdict.as_str());
        out
    }

    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command\t{}", escape(&self.command));
        let _ = writeln!(out, "verdict\t{}", self.verdict.as_str());
        for s in &self.sections {
            let _ = writeln!(out, "section\t{}", escape(&s.title));
            for (k, v) in &s.fields {
                let _ = writeln!(out, "field\t{}\t{}", escape(k), escape(v));
            }
            for t in &s.tables {
                let _ = writeln!(out, "table\t{}\t{}\t{}", escape(&t.name), t.header.len(), t.rows.len());
                let cells = |r: &[String]| r.iter().map(|c| escape(c)).collect::<Vec<_>>().join("\t");
                let _ = writeln!(out, "header\t{}", cells(&t.header));
                for r in &t.rows {
                    let _ = writeln!(out, "row\t{}", cells(r));
                }
            }
        }
        out.push_str("end\n");
        out
    }

    /// Reads back the machine format.
    pub fn from_machine(text: &str) -> Result<Report, String> {
        let mut report: Option<Report> = None;
        let mut verdict = None;
        let mut ended = false;
        for (i, line) in text.lines().enumerate() {
            let bad = || format!("line {}: unexpected `{line}`", i + 1);
            if ended {
                return Err(bad());
            }
            let parts: Vec<&str> = line.split('\t').collect();
            match parts[0] {
                "command" if report.is_none() && parts.len() == 2 => report = Some(Report::new(unescape(parts[1]))),
                "verdict" if parts.len() == 2 => verdict = Some(Verdict::parse(parts[1]).ok_or_else(bad)?),
                "section" if parts.len() == 2 => {
                    report.as_mut().ok_or_else(bad)?.sections.push(Section::new(&unescape(parts[1])))
                }
                "field" if parts.len() == 3 => {
                    let s = report.as_mut().and_then(|r| r.sections.last_mut()).ok_or_else(bad)?;
                    s.fields.push((unescape(parts[1]), unescape(parts[2])));
                }
                "table" if parts.len() == 4 => {
                    let s = report.as_mut().and_then(|r| r.sections.last_mut()).ok_or_else(bad)?;
                    s.tables.push(Table { name: unescape(parts[1]), header: Vec::new(), rows: Vec::new() });
                }
                "header" | "row" => {
                    let t = report
                        .as_mut()
                        .and_then(|r| r.sections.last_mut())
                        .and_then(|s| s.tables.last_mut())
                        .ok_or_else(bad)?;
                    let cells: Vec<String> = parts[1..].iter().map(|c| unescape(c)).collect();
                    if parts[0] == "header" {
                        t.header = cells;
                    } else {
                        t.rows.push(cells);
                    }
                }
                "end" => ended = true,
                _ => return Err(bad()),
            }
        }
        let mut report = report.ok_or("missing `command` line")?;
        report.verdict = verdict.ok_or("missing `verdict` line")?;
        if !ended {
            return Err("missing `end` line".into());
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("compare a\tb");
        r.verdict = Verdict::Unknown;
        let mut s = Section::new("screen");
        s.field("size", 5).field("note", "two\nlines \\ here");
        let mut t = Table::new("pairs", &["a", "b"]);
        t.row(vec!["1".into(), "".into()]);
        s.table(t);
        r.section(s);
        r.section(Section::new("empty"));
        r
    }

    #[test]
    fn machine_round_trip() {
        let r = sample();
        assert_eq!(Report::from_machine(&r.to_machine()).unwrap(), r);
    }

    #[test]
    fn malformed_machine_input() {
        assert!(Report::from_machine("verdict\tpass\nend\n").is_err());
        assert!(Report::from_machine("command\tx\nverdict\tmaybe\nend\n").is_err());
        assert!(Report::from_machine("command\tx\nverdict\tpass\n").is_err());
    }

    #[test]
    fn text_has_verdict() {
        let text = sample().to_text();
        assert!(text.starts_with("$ compare"));
        assert!(text.ends_with("verdict: unknown\n"));
    }
}
