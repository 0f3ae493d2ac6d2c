/** Strict parser for the simple comma-separated files the CLI emits. */

export interface CsvTable {
  headers: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string, required: string[]): CsvTable {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const headers = lines[0].split(",").map((h) => h.trim());
  for (const col of required) {
    if (!headers.includes(col)) {
      throw new Error(`missing column ${col}`);
    }
  }
  const rows: Record<string, string>[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== headers.length) {
      throw new Error(`malformed row: ${line}`);
    }
    const row: Record<string, string> = {};
    headers.forEach((h, i) => (row[h] = parts[i].trim()));
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new Error("empty CSV: no data rows");
  }
  return { headers, rows };
}

export function numericColumn(table: CsvTable, name: string): number[] {
  return table.rows.map((row) => {
    const value = Number(row[name]);
    if (!Number.isFinite(value)) {
      throw new Error(`non-numeric value in column ${name}: ${row[name]}`);
    }
    return value;
  });
}
