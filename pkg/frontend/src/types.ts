/** Document shapes returned by the assessment service API. */

export interface OdpSlotDoc {
  ordinal: number;
  default_text: string;
}

export interface RequirementDoc {
  id: string;
  index: number;
  tier: "base" | "enhanced";
  text: string;
  hipaa_types: string[];
  adversary_effects: string[];
  odp_slots: OdpSlotDoc[];
}

export interface FamilyDoc {
  code: string;
  name: string;
  empty: boolean;
  requirements: RequirementDoc[];
}

export interface CatalogDoc {
  schema_version: string;
  title: string;
  digest: string;
  level: "medium" | "high";
  counts: { families: number; base: number; enhanced: number; total: number };
  families: FamilyDoc[];
}

export interface ScoreFamilyDoc {
  code: string;
  name: string;
  empty: boolean;
  points: number;
  points_display: string;
  count: number;
  answered: number;
  fraction: number;
  percent: string;
  verdict: "pass" | "fail";
}

export interface ScoreDoc {
  revision: number;
  level: string;
  threshold: number;
  threshold_percent: string;
  completion: { answered: number; total: number; fraction: number; percent: string };
  families: ScoreFamilyDoc[];
  total: {
    points: number;
    points_display: string;
    count: number;
    fraction: number;
    percent: string;
    verdict: "pass" | "fail";
  };
  findings: Record<string, { finding: string; not_applicable: boolean }>;
}

export interface EffectsRowDoc {
  family_code: string;
  requirement_id: string;
  requirement_index: number;
  code: string;
  cells: string[];
  no_effects_listed: boolean;
  unanswered: boolean;
}

export interface EffectsDoc {
  revision: number;
  columns: string[];
  no_effects_label: string;
  rows: EffectsRowDoc[];
}

export interface CreatedDoc {
  assessment_id: string;
  revision: number;
}

export interface MutationDoc {
  revision: number;
}

export interface ResponseDoc {
  satisfaction: string;
  partial_value: number | null;
  satisfying_statement: string;
  names: string[];
  validation_tools: string[];
  hipaa_types: string[];
  recorded_at: string | null;
  recorded_by: string;
}

export interface MethodSpecDoc {
  depth: string | null;
  coverage: string | null;
  evidence: { kind: string; description: string }[];
}

export interface AssessmentDoc {
  assessment_id: string;
  file_format: string;
  catalog: { schema_version: string; digest: string };
  level: string;
  organization: string;
  threshold: number;
  completed_on: string | null;
  revision: number;
  responses: Record<string, ResponseDoc>;
  odp_values: Record<string, Record<string, string>>;
  method_matrices: Record<
    string,
    { examine: MethodSpecDoc; interview: MethodSpecDoc; test: MethodSpecDoc }
  >;
}

export const SATISFACTION_CODES = ["Y", "P", "A", "N", "D"] as const;

export const SATISFACTION_LABELS: Record<string, string> = {
  Y: "Yes",
  P: "Partial",
  A: "Alternative",
  N: "No",
  D: "Does not apply",
};

export const PARTIAL_SHORTCUTS: Record<string, number> = {
  PL: 0.25,
  PM: 0.5,
  PH: 0.75,
};

export const HIPAA_TYPES = ["administrative", "technical", "physical"] as const;

export const ASSESSMENT_METHODS = ["examine", "interview", "test"] as const;

export const METHOD_ATTRIBUTES = ["basic", "focused", "comprehensive"] as const;
