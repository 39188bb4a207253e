// Default API base: same origin. `npm run build` rewrites dist/config.js
// from the API_BASE_URL environment variable when set.
export const API_BASE = "";
