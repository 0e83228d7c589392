// Shapes of the query service's JSON responses.

export interface ComponentScores {
  text: number;
  social: number;
  static: number;
}

export interface ApiResult {
  page: string;
  score: number;
  components: ComponentScores;
  position: number;
}

export interface SearchResponse {
  query: string;
  k: number;
  results: ApiResult[];
}

export type WeightTriple = [number, number, number]; // text, social, static
