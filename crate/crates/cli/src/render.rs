use crate::{CliError, Format, Outcome, Table};

pub fn render(outcome: &Outcome, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => serde_json::to_string_pretty(&outcome.report)
            .map(|s| s + "\n")
            .map_err(|e| CliError::other(e.to_string())),
        Format::Csv => csv_table(&outcome.table),
        Format::Text => Ok(text(outcome)),
    }
}

fn csv_table(table: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::other(e.to_string());
    w.write_record(&table.header).map_err(err)?;
    for row in &table.rows {
        w.write_record(row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::other(e.to_string()))
}

fn text(outcome: &Outcome) -> String {
    let r = &outcome.report;
    let mut out = format!("{} {} {}\n", r.tool, r.version, r.config.name());
    let key_width = outcome.table.notes.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in &outcome.table.notes {
        out += &format!("  {k:<key_width$}  {v}\n");
    }
    let t = &outcome.table;
    if !t.rows.is_empty() {
        let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
        for row in &t.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            format!("  {}\n", padded.join("  ").trim_end())
        };
        out.push('\n');
        out += &line(&t.header);
        for row in &t.rows {
            out += &line(row);
        }
    }
    for w in &r.warnings {
        out += &format!("warning: {w}\n");
    }
    out
}
