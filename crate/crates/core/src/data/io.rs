use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Dataset, Provenance};
use crate::error::{Error, Result};

const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
    Last,
}

impl LabelColumn {
    /// A column index when `s` parses as one, otherwise a header name.
    pub fn parse(s: &str) -> Self {
        match s.parse() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) if s == "last" => LabelColumn::Last,
            Err(_) => LabelColumn::Name(s.to_string()),
        }
    }
}

/// Reads a CSV file with a header row. Every column other than the label
/// column must be numeric; class ids follow the order in which labels first
/// appear. Lines starting with `#` are ignored, except that a leading
/// `# provenance:` line written by [`write_dataset_csv`] restores the
/// recorded history ahead of the CSV step.
pub fn load_csv(path: impl AsRef<Path>, label: &LabelColumn) -> Result<Dataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| Error::malformed(path, format!("header: {e}")))?
        .clone();
    if headers.is_empty() {
        return Err(Error::malformed(path, "empty header"));
    }
    let label_idx = match label {
        LabelColumn::Name(name) => headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::malformed(path, format!("no column named {name:?}")))?,
        LabelColumn::Index(i) if *i < headers.len() => *i,
        LabelColumn::Index(i) => {
            return Err(Error::malformed(
                path,
                format!("label column {i} out of range ({} columns)", headers.len()),
            ))
        }
        LabelColumn::Last => headers.len() - 1,
    };

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut class_ids: BTreeMap<String, usize> = BTreeMap::new();
    for (row, record) in reader.records().enumerate() {
        let row = row + 1;
        let record = record.map_err(|e| Error::malformed(path, format!("row {row}: {e}")))?;
        if record.len() != headers.len() {
            return Err(Error::malformed(
                path,
                format!("row {row} has {} fields, header has {}", record.len(), headers.len()),
            ));
        }
        let mut point = Vec::with_capacity(headers.len() - 1);
        for (col, field) in record.iter().enumerate() {
            if col == label_idx {
                continue;
            }
            let value: f64 = field.trim().parse().map_err(|_| {
                Error::malformed(
                    path,
                    format!(
                        "row {row}, column {} ({}): {field:?} is not a number",
                        col + 1,
                        &headers[col]
                    ),
                )
            })?;
            if !value.is_finite() {
                return Err(Error::malformed(
                    path,
                    format!("row {row}, column {} ({}): value is not finite", col + 1, &headers[col]),
                ));
            }
            point.push(value);
        }
        let name = record[label_idx].trim().to_string();
        let id = *class_ids.entry(name.clone()).or_insert_with(|| {
            class_names.push(name);
            class_names.len() - 1
        });
        points.push(point);
        labels.push(id);
    }
    let mut ds = Dataset::new(points, labels, class_names)?;
    ds.provenance = recorded_history(path)?;
    ds.provenance.push(Provenance::Csv {
        path: path.to_path_buf(),
        label_column: headers[label_idx].to_string(),
    });
    Ok(ds)
}

fn recorded_history(path: &Path) -> Result<Vec<Provenance>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .map_err(|e| Error::io(path, e))?;
    match first.trim_end().strip_prefix("# provenance: ") {
        Some(json) => serde_json::from_str(json).map_err(|e| Error::malformed(path, format!("provenance line: {e}"))),
        None => Ok(Vec::new()),
    }
}

/// Reads a dataset written by [`write_dataset_csv`].
pub fn read_dataset_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    load_csv(path, &LabelColumn::Name("label".into()))
}

/// Writes feature columns `x0..x{d-1}` and a `label` column holding class
/// names, preceded by a `# provenance:` comment line carrying the dataset's
/// history as JSON.
pub fn write_dataset_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    writeln!(file, "# provenance: {}", serde_json::to_string(&ds.provenance)?).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    let mut header: Vec<String> = (0..ds.dimension()).map(|j| format!("x{j}")).collect();
    header.push("label".into());
    writer.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (p, &l) in ds.points.iter().zip(&ds.labels) {
        let mut row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
        row.push(ds.class_names[l].clone());
        writer.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::malformed(path, format!("{other:?}")),
    }
}

fn read_u32(bytes: &[u8], offset: usize) -> Option<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
}

/// Reads an IDX image file and its label file. Pixels are scaled from bytes
/// to `[0, 1]`; classes are the distinct label values in increasing order.
pub fn load_idx(images: impl AsRef<Path>, labels: impl AsRef<Path>) -> Result<Dataset> {
    let (images, labels) = (images.as_ref(), labels.as_ref());
    let img = fs::read(images).map_err(|e| Error::io(images, e))?;
    let lab = fs::read(labels).map_err(|e| Error::io(labels, e))?;

    let short = |p: &Path| Error::malformed(p, "file too short for its header");
    let magic = read_u32(&img, 0).ok_or_else(|| short(images))?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(Error::malformed(
            images,
            format!("magic {magic:#010x}, expected {IDX_IMAGES_MAGIC:#010x}"),
        ));
    }
    let count = read_u32(&img, 4).ok_or_else(|| short(images))? as usize;
    let rows = read_u32(&img, 8).ok_or_else(|| short(images))? as usize;
    let cols = read_u32(&img, 12).ok_or_else(|| short(images))? as usize;
    let size = rows * cols;
    if img.len() != 16 + count * size {
        return Err(Error::malformed(
            images,
            format!(
                "{count} images of {rows}x{cols} need {} bytes, file has {}",
                16 + count * size,
                img.len()
            ),
        ));
    }

    let magic = read_u32(&lab, 0).ok_or_else(|| short(labels))?;
    if magic != IDX_LABELS_MAGIC {
        return Err(Error::malformed(
            labels,
            format!("magic {magic:#010x}, expected {IDX_LABELS_MAGIC:#010x}"),
        ));
    }
    let label_count = read_u32(&lab, 4).ok_or_else(|| short(labels))? as usize;
    if label_count != count {
        return Err(Error::malformed(
            labels,
            format!("{label_count} labels for {count} images"),
        ));
    }
    if lab.len() != 8 + count {
        return Err(Error::malformed(
            labels,
            format!("{count} labels need {} bytes, file has {}", 8 + count, lab.len()),
        ));
    }

    let raw = &lab[8..];
    let mut values: Vec<u8> = raw.to_vec();
    values.sort_unstable();
    values.dedup();
    let points = img[16..]
        .chunks_exact(size.max(1))
        .take(count)
        .map(|chunk| chunk.iter().map(|&b| f64::from(b) / 255.0).collect())
        .collect();
    let ids = raw
        .iter()
        .map(|v| values.binary_search(v).expect("value present"))
        .collect();
    let names = values.iter().map(u8::to_string).collect();
    let mut ds = Dataset::new(points, ids, names)?;
    ds.provenance.push(Provenance::Idx {
        images: images.to_path_buf(),
        labels: labels.to_path_buf(),
    });
    Ok(ds)
}
