use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::JobArea;
use crate::extraction::EntityType;

/// Typed vocabulary for one job area.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryPool {
    pub skills: Vec<String>,
    pub education: Vec<String>,
    pub qualifications: Vec<String>,
    pub experience: Vec<String>,
}

impl CategoryPool {
    pub fn len(&self) -> usize {
        self.skills.len() + self.education.len() + self.qualifications.len() + self.experience.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All terms with their entity type, in a fixed order.
    pub fn typed_terms(&self) -> Vec<(EntityType, &str)> {
        let groups = [
            (EntityType::Education, &self.education),
            (EntityType::Skill, &self.skills),
            (EntityType::Qualification, &self.qualifications),
            (EntityType::Experience, &self.experience),
        ];
        groups
            .into_iter()
            .flat_map(|(t, terms)| terms.iter().map(move |s| (t, s.as_str())))
            .collect()
    }
}

/// Per-category term pools driving the synthetic corpus generator.
pub type EntityPools = BTreeMap<JobArea, CategoryPool>;

fn pool(skills: &[&str], education: &[&str], qualifications: &[&str], experience: &[&str]) -> CategoryPool {
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
    CategoryPool {
        skills: v(skills),
        education: v(education),
        qualifications: v(qualifications),
        experience: v(experience),
    }
}

/// Built-in pools: 14 distinct terms per category, no term shared between categories.
pub fn default_pools() -> EntityPools {
    use JobArea::*;
    let mut m = BTreeMap::new();
    m.insert(InformationTechnology, pool(
        &["python", "sql", "linux administration", "cloud computing", "java", "network security", "docker"],
        &["bsc computer science", "msc software engineering"],
        &["aws certification", "ccna"],
        &["system migration", "helpdesk support", "database tuning"],
    ));
    m.insert(BusinessDevelopment, pool(
        &["market research", "lead generation", "partnership building", "negotiation", "crm software", "pitch decks", "competitive analysis"],
        &["mba strategy", "bba marketing"],
        &["strategic planning", "growth hacking"],
        &["market expansion", "deal closing", "client acquisition"],
    ));
    m.insert(Finance, pool(
        &["financial modeling", "valuation", "budget forecasting", "risk analysis", "bloomberg terminal", "managerial finance", "capital markets"],
        &["msc finance", "bsc economics"],
        &["cfa charter", "frm certification"],
        &["portfolio review", "variance reporting", "treasury operations"],
    ));
    m.insert(Advocate, pool(
        &["litigation", "legal drafting", "contract law", "case research", "court pleading", "legal counsel", "arbitration"],
        &["llb degree", "llm degree"],
        &["bar admission", "notary commission"],
        &["client representation", "trial preparation", "legal opinions"],
    ));
    m.insert(Accountant, pool(
        &["accounting", "bookkeeping", "tax preparation", "general ledger", "accounts payable", "quickbooks", "payroll processing"],
        &["bcom accounting", "mcom taxation"],
        &["cpa license", "acca membership"],
        &["month end closing", "audit support", "reconciliations"],
    ));
    m.insert(Engineering, pool(
        &["autocad", "matlab", "finite element analysis", "thermodynamics", "solidworks", "circuit design", "quality control"],
        &["beng mechanical", "meng electrical"],
        &["professional engineer", "six sigma"],
        &["prototype testing", "plant maintenance", "design reviews"],
    ));
    m.insert(Chef, pool(
        &["menu planning", "pastry", "food safety", "knife skills", "sous vide", "grilling", "plating"],
        &["culinary arts diploma", "hospitality degree"],
        &["haccp certification", "servsafe"],
        &["kitchen management", "catering events", "recipe development"],
    ));
    m.insert(Aviation, pool(
        &["flight planning", "aircraft maintenance", "avionics", "air traffic", "navigation systems", "crew resource", "aviation safety"],
        &["aeronautical engineering", "aviation management"],
        &["commercial pilot license", "faa certification"],
        &["flight hours", "ground operations", "hangar inspections"],
    ));
    m.insert(Fitness, pool(
        &["personal training", "strength conditioning", "nutrition coaching", "yoga", "pilates", "cardio programs", "injury prevention"],
        &["kinesiology degree", "sports science"],
        &["nasm certification", "cpr certified"],
        &["group classes", "fitness assessments", "gym operations"],
    ));
    m.insert(Sales, pool(
        &["sales", "cold calling", "upselling", "sales pipeline", "salesforce", "quota attainment", "retail sales"],
        &["ba commerce", "diploma marketing"],
        &["sales certification", "spin selling"],
        &["territory management", "account growth", "product demos"],
    ));
    m.insert(Banking, pool(
        &["credit analysis", "loan processing", "anti money laundering", "kyc compliance", "retail banking", "wealth management", "mortgage lending"],
        &["banking diploma", "msc banking"],
        &["cams certification", "series 7"],
        &["branch operations", "loan origination", "teller services"],
    ));
    m.insert(Healthcare, pool(
        &["patient care", "clinical documentation", "phlebotomy", "emr systems", "vital signs", "infection control", "medical coding"],
        &["bsc nursing", "mbbs"],
        &["registered nurse", "bls certification"],
        &["ward rounds", "patient triage", "discharge planning"],
    ));
    m.insert(Consultant, pool(
        &["stakeholder management", "process improvement", "change management", "business analysis", "workshop facilitation", "benchmarking", "gap analysis"],
        &["mba consulting", "msc management"],
        &["pmp certification", "prince2"],
        &["client engagements", "operating models", "transformation programs"],
    ));
    m.insert(Construction, pool(
        &["site supervision", "blueprint reading", "concrete work", "scaffolding", "cost estimation", "osha compliance", "heavy equipment"],
        &["civil engineering", "construction management"],
        &["osha 30", "forklift license"],
        &["site inspections", "subcontractor coordination", "project scheduling"],
    ));
    m.insert(PublicRelations, pool(
        &["press releases", "media relations", "crisis communication", "brand messaging", "social media", "event promotion", "copywriting"],
        &["ba journalism", "mass communication"],
        &["apr accreditation", "cipr diploma"],
        &["press conferences", "media campaigns", "influencer outreach"],
    ));
    m.insert(HumanResources, pool(
        &["recruitment", "onboarding", "employee relations", "performance appraisal", "hris", "labor law", "compensation planning"],
        &["mba human resources", "ba psychology"],
        &["shrm certification", "cipd level"],
        &["talent acquisition", "exit interviews", "policy drafting"],
    ));
    m.insert(Designer, pool(
        &["adobe photoshop", "illustrator", "figma", "typography", "ux research", "wireframing", "brand identity"],
        &["bfa graphic design", "interaction design"],
        &["adobe certified", "ux certificate"],
        &["design systems", "client mockups", "usability testing"],
    ));
    m.insert(Arts, pool(
        &["oil painting", "sculpture", "art history", "gallery curation", "printmaking", "ceramics", "art direction"],
        &["bfa fine arts", "mfa studio"],
        &["museum studies", "art therapy"],
        &["solo exhibitions", "artist residencies", "mural commissions"],
    ));
    m.insert(Teacher, pool(
        &["lesson planning", "classroom management", "curriculum design", "student assessment", "special education", "differentiated instruction", "tutoring"],
        &["bed degree", "med curriculum"],
        &["teaching license", "tefl certificate"],
        &["parent conferences", "grading", "after school clubs"],
    ));
    m.insert(Apparel, pool(
        &["pattern making", "garment construction", "textile sourcing", "fashion merchandising", "sewing", "trend forecasting", "fabric testing"],
        &["fashion design diploma", "textile engineering"],
        &["garment technologist", "cad pattern"],
        &["sample development", "vendor sourcing", "production runs"],
    ));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{english_stopwords, phrase_key, token_count};
    use std::collections::HashSet;

    #[test]
    fn default_pools_are_disjoint_and_clean() {
        let pools = default_pools();
        assert_eq!(pools.len(), 20);
        let mut seen = HashSet::new();
        for (area, p) in &pools {
            assert!(p.len() >= 8, "{area}");
            for (_, term) in p.typed_terms() {
                assert_eq!(phrase_key(term), term, "{term} must already be canonical");
                assert!(token_count(term) <= 3, "{term}");
                assert!(
                    term.split(' ').any(|w| !english_stopwords().contains(w)),
                    "{term}"
                );
                assert!(seen.insert(term.to_string()), "duplicate term {term}");
            }
        }
    }
}
