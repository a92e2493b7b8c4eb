// Payload shapes of the annotation service JSON API. These mirror the
// published schemas; the client never invents fields the server would
// reject.

export type Workflow =
  | "FreeTextDiagnosis"
  | "TemplateApplication"
  | "InformativenessJudging";

export type Extractability =
  | "extractable"
  | "extractable_with_changes"
  | "not_extractable";

export const NOT_APPLICABLE = "NotApplicable";

export interface TopicDoc {
  id: string;
  motion: string;
  points: { id: string; text: string }[];
}

export interface CounterargumentDoc {
  id: string;
  topic_id: string;
  text: string;
  sentences: [number, number][];
  author_kind: string;
}

export interface CommentDoc {
  id: string;
  counterargument_id: string;
  annotator_id: string;
  target: number[];
  text: string;
}

export interface TemplateDoc {
  id: string;
  dimension: string;
  slots: string[];
  surface_forms: Record<string, string>;
}

export interface TemplateSetDoc {
  version: string;
  templates: TemplateDoc[];
}

export interface SourceSpan {
  doc_kind: "counterargument" | "point";
  doc_id: string;
  start: number;
  end: number;
}

export interface FillerPayload {
  text: string;
  extractability: Extractability;
  source_span: SourceSpan | null;
}

export interface FreeTextPayload {
  target: number[];
  text: string;
}

export interface TemplateApplicationPayload {
  label: string;
  fillers: Record<string, FillerPayload> | null;
}

export interface JudgmentPayload {
  score: 1 | 2 | 3;
}

export type SubmissionPayload =
  | FreeTextPayload
  | TemplateApplicationPayload
  | JudgmentPayload;

interface TaskBase {
  item_id: string;
  revision: number;
  workflow: Workflow;
  /** Present on items of the pre-annotation calibration batch. */
  calibration?: boolean;
}

export interface FreeTextTask extends TaskBase {
  workflow: "FreeTextDiagnosis";
  counterargument: CounterargumentDoc;
  topic: TopicDoc;
}

export interface TemplateApplicationTask extends TaskBase {
  workflow: "TemplateApplication";
  comment: CommentDoc;
  counterargument: CounterargumentDoc;
  topic: TopicDoc;
}

export interface JudgingTask extends TaskBase {
  workflow: "InformativenessJudging";
  original_comment: string;
  templated_comment: string;
  template_id: string;
  rubric: Record<string, string>;
}

export type Task = FreeTextTask | TemplateApplicationTask | JudgingTask;

export interface SubmitAck {
  ok: boolean;
  revision: number;
}

export interface ProjectInfo {
  id: string;
  workflow: Workflow;
  locale: string;
  n_items: number;
  progress: { assignments: number; done: number };
}
