//! Shared test fixture: a small planted corpus with one topic
//! (lung cancer / ERBB2), knowledge bases, and exhaustive judgments.
//!
//! The corpus is constructed so each pipeline stage has something to do:
//! a document reachable only through expansion terms, a high-scoring
//! off-disease document the title penalty must demote, keyword-rich
//! relevant documents the reranker must promote, a title-only match the
//! abstract gate must exclude, a duplicate record the ingest policy must
//! drop, and enough background articles that term statistics stay
//! non-degenerate.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use pmsearch_cli::config::PipelineConfig;

pub const TOPIC: u32 = 36;

/// Relevant but reachable only via alias/acronym clauses.
pub const ALIAS_ONLY_DOC: &str = "14981584";
/// Non-relevant with a high raw score and no disease term in the title.
pub const PENALIZED_DOC: &str = "12755489";
/// Relevant and keyword-rich; the trained reranker must promote it.
pub const BOOSTED_DOC: &str = "15312350";
/// Matches the query in its title only; must never be retrieved.
pub const TITLE_ONLY_DOC: &str = "30000022";
/// Carries the "lung cancer (NSCLC)" pattern the acronym miner picks up.
pub const MINING_SOURCE_DOC: &str = "30000001";

/// (id, title, abstract, pub_types, mesh, grade)
type DocRow = (
    &'static str,
    &'static str,
    &'static str,
    &'static [&'static str],
    &'static [&'static str],
    u32,
);

pub const DOCS: &[DocRow] = &[
    // --- relevant ---
    (
        ALIAS_ONLY_DOC,
        "The role of growth factor receptor expression and trastuzumab in non-small cell lung cancer",
        "The HER-2/neu receptor is a member of a family of signaling receptors and appears to \
         play a major role in the biology of this disease. Trastuzumab added to standard \
         chemotherapy shows survival benefit and improved outcome in patients with advanced \
         NSCLC in preliminary reports from cooperative group studies. Treatment with \
         trastuzumab remains a therapeutic option under active study in the first line \
         setting, and therapy is well tolerated in most patients with good performance status \
         at the time of enrollment.",
        &["Clinical Trial"],
        &["Humans", "Carcinoma, Non-Small-Cell Lung/drug therapy", "Receptor, ErbB-2/therapeutic use"],
        2,
    ),
    (
        BOOSTED_DOC,
        "Prognostic value of expression of FASE, HER-2/neu, bcl-2 and p53 in stage I non-small cell lung cancer",
        "To evaluate the prognostic value of fatty acid synthase expression after surgery in a \
         consecutive series of resected patients. The five year survival rate was lower in \
         HER-2/neu positive patients than in negative patients, which indicated significantly \
         poor survival in this stage. Expression of both markers gave independent prognostic \
         factors for survival and clinical outcome after therapy and treatment. The cohort was \
         followed for ten years with complete ascertainment of vital status.",
        &["Journal Article"],
        &["Humans", "Lung Neoplasms/drug therapy", "Survival Rate"],
        2,
    ),
    (
        MINING_SOURCE_DOC,
        "Treatment of advanced lung cancer with targeted therapy",
        "Treatment strategies in advanced lung cancer (NSCLC) have improved over the decade. \
         Therapy for lung cancer now targets the ERBB2 pathway in selected patients. Clinical \
         treatment of lung cancer improves survival, and outcome for lung cancer patients \
         continues to improve.",
        &["Clinical Trial"],
        &["Humans", "Lung Neoplasms/drug therapy"],
        1,
    ),
    (
        "30000002",
        "Clinical outcome of lung cancer treatment with erlotinib therapy",
        "Lung cancer patients with ERBB2 mutations received erlotinib in this clinical trial. \
         Treatment improved survival and outcome for lung cancer patients with confirmed ERBB2 \
         alterations. Response to therapy in lung cancer was durable, prognosis was favorable, \
         and lung cancer control in the lung cancer cohort was sustained.",
        &["Clinical Trial"],
        &["Humans", "Lung Neoplasms/drug therapy", "Protein Kinase Inhibitors/therapeutic use"],
        1,
    ),
    (
        "30000003",
        "Survival outcome after treatment in advanced lung cancer",
        "Prognostic analysis of survival and clinical outcome in this cohort. Therapy and \
         treatment decisions improved prognosis substantially. Therapeutic management with \
         immunotherapy produced outcome gains and survival benefit for patients with lung cancer.",
        &["Clinical Trial"],
        &["Humans", "Lung Neoplasms/drug therapy", "Antineoplastic Agents/therapeutic use"],
        1,
    ),
    // --- non-relevant: high score, wrong disease in the title ---
    (
        PENALIZED_DOC,
        "HER-2/neu and topoisomerase IIalpha in breast cancer",
        "In breast cancer the predominant genetic mechanism of oncogene activation is \
         amplification. The HER-2 oncogene also known as ErbB2 or c-erbB2 or HER-2/neu is the \
         most frequently amplified oncogene in breast cancer. It is implicated in the \
         pathogenesis of breast tumor development, and in each case the model of HER-2 \
         amplification was examined in tissue with staining and dna analysis of the amplified \
         locus in primary tumors.",
        &["Journal Article"],
        &["Humans", "Breast Neoplasms/genetics"],
        0,
    ),
    // --- non-relevant: disease in title, laboratory-flavored abstracts ---
    (
        "30000010",
        "Pathogenesis of lung cancer in mouse studies",
        "The pathogenesis of lung cancer (NSCLC) was studied in mouse tissue. Tumor \
         development in ERBB2 transgenic lung cancer requires dna replication stress. Lung \
         cancer progression of ERBB2 driven lung cancer in the mouse model was profiled with \
         staining in each case, and lung cancer lesions were graded.",
        &["Journal Article"],
        &["Mice", "Disease Models, Animal"],
        0,
    ),
    (
        "30000011",
        "Lung cancer tissue banking and dna quality",
        "Tissue banking protocols for lung cancer were compared across sites. Dna quality from \
         lung cancer tissue depends on fixation time. ERBB2 assay results in lung cancer \
         specimens were stable, ERBB2 calls in frozen lung cancer matched, ERBB2 reflex testing \
         of lung cancer blocks was repeated, and lung cancer dna yield was measured in each \
         case.",
        &["Journal Article"],
        &["Specimen Handling"],
        0,
    ),
    (
        "30000012",
        "Tumor microenvironment of non-small cell lung cancer",
        "The tumor microenvironment of lung cancer contains stromal tissue. Tumor infiltration \
         in lung cancer was mapped with staining panels. ERBB2 positive lung cancer samples \
         showed specific stromal signatures, ERBB2 negative lung cancer samples did not, and \
         lung cancer sections from each case were imaged.",
        &["Journal Article"],
        &["Tumor Microenvironment"],
        0,
    ),
    (
        "30000013",
        "Lung cancer cell lines for laboratory staining",
        "Lung cancer cell lines were established from tumor tissue. Staining conditions for \
         lung cancer cells were optimized. The ERBB2 amplified lung cancer model panel covers \
         common dna mutations, ERBB2 wild type lung cancer lines, and further lung cancer \
         subtypes.",
        &["Journal Article"],
        &["Cell Line, Tumor"],
        0,
    ),
    (
        "30000014",
        "Development of lung cancer xenograft systems",
        "Development of xenografts for lung cancer used mouse hosts. Tumor take rates for lung \
         cancer grafts vary with tissue source. ERBB2 driven lung cancer (NSCLC) engraftment \
         in each case was scored, ERBB2 expression was verified, and lung cancer graft growth \
         in the lung cancer cohort was tracked.",
        &["Journal Article"],
        &["Mice", "Heterografts"],
        0,
    ),
    (
        "30000015",
        "Molecular pathogenesis of lung cancer",
        "The molecular pathogenesis of lung cancer involves stepwise dna alterations. Tumor \
         suppressor loss in lung cancer precedes invasion. ERBB2 copy number in lung cancer \
         rises with stage, ERBB2 gains appear late in lung cancer, and lung cancer development \
         follows specific mutational orders in tissue.",
        &["Journal Article"],
        &["Neoplasms/genetics"],
        0,
    ),
    (
        "30000016",
        "Lung cancer genomics and dna methylation",
        "Dna methylation in lung cancer marks tumor subtypes. Lung cancer genomes show specific \
         methylation of ERBB2 enhancers. Lung cancer tissue was profiled in each case, ERBB2 \
         promoter states in lung cancer were scored, and lung cancer methylomes were compared \
         with staining data.",
        &["Journal Article"],
        &["Dna Methylation"],
        0,
    ),
    (
        "30000017",
        "Histology of non-small cell lung cancer tissue specimens",
        "Histology of lung cancer was reviewed across tumor banks. Lung cancer tissue sections \
         received standard staining. ERBB2 immunohistochemistry in lung cancer was scored, \
         ERBB2 positive lung cancer cases were flagged, and the lung cancer case series covered \
         all major subtypes in tissue.",
        &["Journal Article"],
        &["Histological Techniques"],
        0,
    ),
    // --- non-relevant: background noise ---
    (
        "30000020",
        "Bile duct carcinoma management strategies",
        "Cholangiocellular carcinoma of the biliary tract requires multidisciplinary management. \
         Carcinoma progression was monitored in the registry.",
        &["Journal Article"],
        &["Bile Duct Neoplasms"],
        0,
    ),
    (
        "30000021",
        "Estrogen receptor expression in breast carcinoma",
        "Estrogen receptor status in breast carcinoma was assessed. Tumor tissue specimens \
         showed specific staining patterns in each case.",
        &["Journal Article"],
        &["Receptors, Estrogen"],
        0,
    ),
    (
        TITLE_ONLY_DOC,
        "Lung cancer screening in current practice",
        "Screening programs reduce mortality. Participation and adherence were analyzed in the \
         screening cohort.",
        &["Journal Article"],
        &["Mass Screening"],
        0,
    ),
    (
        "30000023",
        "HER2 signaling in gastric tumors",
        "HER2 amplification drives growth in gastric tumor model systems. The dna damage \
         response in tissue was profiled with staining.",
        &["Journal Article"],
        &["Stomach Neoplasms"],
        0,
    ),
    (
        "30000024",
        "A mouse model of metastatic spread",
        "A mouse model of tumor development with specific staining combinations in tissue. In \
         each case the dna analysis showed pathogenesis markers in carcinoma.",
        &["Journal Article"],
        &["Mice", "Neoplasm Metastasis"],
        0,
    ),
    // --- background articles: keep collection statistics realistic ---
    (
        "40000001",
        "HER-2 overexpression in breast carcinoma",
        "Amplification of HER-2 in breast carcinoma predicts response to trastuzumab in several \
         reported series of archival material. Tumor tissue from the registry showed membrane \
         HER-2/neu staining in most specimens reviewed by the central laboratory.",
        &["Journal Article"],
        &["Breast Neoplasms"],
        0,
    ),
    (
        "40000002",
        "HER-2 testing guidelines for gastric tumors",
        "Scoring criteria for HER-2 in gastric tumor specimens were harmonized across reference \
         laboratories during two consensus rounds. Tissue controls distributed to the sites \
         included HER-2 positive cell pellets and negative parenchyma.",
        &["Journal Article"],
        &["Stomach Neoplasms"],
        0,
    ),
    (
        "40000003",
        "HER-2 amplification in esophageal carcinoma",
        "Copy number gains of HER-2 in esophageal carcinoma were measured with in situ methods \
         across a multicenter series. The tumor registry recorded HER-2 status for each case \
         together with stage and histology.",
        &["Journal Article"],
        &["Esophageal Neoplasms"],
        0,
    ),
    (
        "40000004",
        "HER-2 directed antibodies in preclinical development",
        "Antibodies against HER-2 entered preclinical development after affinity maturation of \
         the parental clones. Binding of HER-2 in engineered tissue models was quantified under \
         flow conditions mimicking perfusion.",
        &["Journal Article"],
        &["Antibodies, Monoclonal"],
        0,
    ),
    (
        "40000005",
        "Trastuzumab escape and HER-2/neu signaling in breast carcinoma",
        "Escape from trastuzumab involves conformational changes of the receptor ectodomain in \
         cultured lines maintained under selection. Tumor cells keep HER-2/neu signaling active \
         under drug pressure through compensatory dimerization partners.",
        &["Journal Article"],
        &["Breast Neoplasms"],
        0,
    ),
    (
        "40000006",
        "Cardiac monitoring during HER-2/neu directed regimens",
        "Cardiac monitoring during trastuzumab regimens for HER-2/neu positive disease is \
         recommended by current practice guidelines. Targeted regimens of this class require \
         baseline cardiac assessment and periodic imaging during the treatment course.",
        &["Journal Article"],
        &["Cardiotoxicity"],
        0,
    ),
    (
        "40000007",
        "Melanoma incidence trends",
        "Incidence of melanoma rose in fair-skinned populations. Registry data were adjusted \
         for age and latitude.",
        &["Journal Article"],
        &["Melanoma"],
        0,
    ),
    (
        "40000008",
        "Colorectal screening uptake across regions",
        "Screening uptake varied by region. Polyp detection rates were tabulated for each \
         program year.",
        &["Journal Article"],
        &["Colorectal Neoplasms"],
        0,
    ),
    (
        "40000009",
        "Prostate biopsy grading concordance",
        "Grading concordance between pathologists was moderate. Biopsy cores were reviewed \
         centrally by a reference panel.",
        &["Journal Article"],
        &["Prostatic Neoplasms"],
        0,
    ),
    (
        "40000010",
        "Dietary factors in gastric conditions",
        "Dietary salt intake correlates with mucosal changes. Cohort food diaries were analyzed \
         with standard instruments.",
        &["Journal Article"],
        &["Diet"],
        0,
    ),
    (
        "40000011",
        "KRAS mutations in colorectal adenomas",
        "KRAS mutation frequency in adenomas was estimated from registry samples. Genotyping \
         used archival material.",
        &["Journal Article"],
        &["Colorectal Neoplasms"],
        0,
    ),
    (
        "40000012",
        "Biomarker panels for pancreatic lesions",
        "Panels combining protein markers classified lesions. Validation used independent \
         cohorts from two registries.",
        &["Journal Article"],
        &["Pancreatic Neoplasms"],
        0,
    ),
];

pub fn relevant_ids() -> Vec<&'static str> {
    DOCS.iter().filter(|d| d.5 >= 1).map(|d| d.0).collect()
}

fn doc_json(
    id: &str,
    title: &str,
    abstract_text: &str,
    pub_types: &[&str],
    mesh: &[&str],
) -> String {
    serde_json::json!({
        "id": id,
        "title": title,
        "abstract": abstract_text,
        "pub_types": pub_types,
        "mesh": mesh,
    })
    .to_string()
}

pub fn corpus_jsonl() -> String {
    let mut out = String::new();
    for (id, title, abstract_text, pub_types, mesh, _) in DOCS {
        out.push_str(&doc_json(id, title, abstract_text, pub_types, mesh));
        out.push('\n');
        if *id == MINING_SOURCE_DOC {
            // A revised copy of the same article: the first version must win.
            out.push_str(&doc_json(
                id,
                title,
                "A slightly revised abstract for the same article that must be ignored.",
                pub_types,
                mesh,
            ));
            out.push('\n');
        }
    }
    out
}

pub fn topics_xml() -> String {
    format!(
        "<topics>\n  <topic number=\"{TOPIC}\">\n    <disease>lung cancer</disease>\n    \
         <gene>ERBB2</gene>\n    <demographic>55-year-old female never-smoker</demographic>\n  \
         </topic>\n</topics>\n"
    )
}

pub fn disease_kb_jsonl() -> String {
    concat!(
        "{\"canonical\":\"lung cancer\",\"preferred\":\"lung carcinoma\",\
         \"synonyms\":[\"non-small cell lung cancer\"],\"acronyms\":[]}\n",
        "{\"canonical\":\"cholangiocarcinoma\",\"preferred\":\"cholangiocarcinoma of biliary tract\",\
         \"synonyms\":[\"bile duct carcinoma\",\"bile duct adenocarcinoma\",\"cholangiocellular carcinoma\"],\
         \"acronyms\":[\"CCA\"]}\n"
    )
    .to_string()
}

pub fn gene_table_tsv() -> String {
    "#symbol\taliases\nERBB2\tHER-2/neu|HER2|NEU|ERBB-2|CD340\nKRAS\tC-K-RAS|K-Ras|KRAS2\n"
        .to_string()
}

pub fn qrels_text() -> String {
    let mut out = String::new();
    for (id, _, _, _, _, grade) in DOCS {
        out.push_str(&format!("{TOPIC} 0 {id} {grade}\n"));
    }
    out
}

pub struct Fixture {
    pub dir: PathBuf,
    pub config_path: PathBuf,
}

impl Fixture {
    pub fn config(&self) -> PipelineConfig {
        PipelineConfig::load(&self.config_path).expect("fixture config loads")
    }
}

/// Writes the fixture inputs and a config into `dir`. Output artifacts
/// (index, model, run) land under `dir/out`.
pub fn write_fixture(dir: &Path) -> Fixture {
    std::fs::create_dir_all(dir).unwrap();
    std::fs::write(dir.join("corpus.jsonl"), corpus_jsonl()).unwrap();
    std::fs::write(dir.join("topics.xml"), topics_xml()).unwrap();
    std::fs::write(dir.join("disease_kb.jsonl"), disease_kb_jsonl()).unwrap();
    std::fs::write(dir.join("gene_info.tsv"), gene_table_tsv()).unwrap();
    std::fs::write(dir.join("qrels.txt"), qrels_text()).unwrap();
    let config = r#"run_tag = "pmsearch"
strategy = "full"
depth = 1000

[paths]
corpus = "corpus.jsonl"
topics = "topics.xml"
disease_kb = "disease_kb.jsonl"
gene_table = "gene_info.tsv"
qrels = "qrels.txt"
index_dir = "out/index"
model_file = "out/model.json"
run_file = "out/run.txt"
"#;
    let config_path = dir.join("config.toml");
    std::fs::write(&config_path, config).unwrap();
    Fixture {
        dir: dir.to_path_buf(),
        config_path,
    }
}
